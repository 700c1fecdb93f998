/* tslint:disable */
/* eslint-disable */

/**
 * A ring chain advanced in fixed steps at half the stability limit.
 */
export class ChainDemo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Integrates forward by `duration` (rounded up to whole steps).
     */
    advance(duration: number): void;
    displacements(): Float64Array;
    energy(): number;
    /**
     * Adds `impulse` to the velocity of `site`.
     */
    kick(site: number, impulse: number): void;
    maxSignalSpeed(): number;
    constructor(sites: number, hops: string);
    time(): number;
}

export function dispersion(hops: string, points: number): Float64Array;

export function frameFit(v: number, c_s: number, epsilon: number): Float64Array;

export function maxSignalSpeed(hops: string): number;

export function radarGrid(v: number, c_s: number, epsilon: number, lines: number, samples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_chaindemo_free: (a: number, b: number) => void;
    readonly chaindemo_advance: (a: number, b: number) => [number, number];
    readonly chaindemo_displacements: (a: number) => [number, number];
    readonly chaindemo_energy: (a: number) => number;
    readonly chaindemo_kick: (a: number, b: number, c: number) => [number, number];
    readonly chaindemo_maxSignalSpeed: (a: number) => number;
    readonly chaindemo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly chaindemo_time: (a: number) => number;
    readonly dispersion: (a: number, b: number, c: number) => [number, number, number, number];
    readonly frameFit: (a: number, b: number, c: number) => [number, number, number, number];
    readonly maxSignalSpeed: (a: number, b: number) => [number, number, number];
    readonly radarGrid: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
