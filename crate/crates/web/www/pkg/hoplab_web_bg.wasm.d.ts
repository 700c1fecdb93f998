/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_chaindemo_free: (a: number, b: number) => void;
export const chaindemo_advance: (a: number, b: number) => [number, number];
export const chaindemo_displacements: (a: number) => [number, number];
export const chaindemo_energy: (a: number) => number;
export const chaindemo_kick: (a: number, b: number, c: number) => [number, number];
export const chaindemo_maxSignalSpeed: (a: number) => number;
export const chaindemo_new: (a: number, b: number, c: number) => [number, number, number];
export const chaindemo_time: (a: number) => number;
export const dispersion: (a: number, b: number, c: number) => [number, number, number, number];
export const frameFit: (a: number, b: number, c: number) => [number, number, number, number];
export const maxSignalSpeed: (a: number, b: number) => [number, number, number];
export const radarGrid: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
