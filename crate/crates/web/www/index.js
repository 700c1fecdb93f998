import init, { dispersion, maxSignalSpeed, ChainDemo, radarGrid, frameFit } from "./pkg/hoplab_web.js";

const $ = (id) => document.getElementById(id);

function report(out, f) {
  try {
    out.classList.remove("error");
    return f();
  } catch (e) {
    out.textContent = String(e.message ?? e);
    out.classList.add("error");
    return null;
  }
}

function polyline(ctx, xs, ys, colour) {
  ctx.strokeStyle = colour;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(x, ys[i]) : ctx.moveTo(x, ys[i])));
  ctx.stroke();
}

function drawDispersion() {
  const canvas = $("disp");
  const ctx = canvas.getContext("2d");
  const out = $("disp-out");
  const rows = report(out, () => dispersion($("disp-hops").value, 400));
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!rows) return;
  const k = [], w = [], vg = [];
  for (let i = 0; i < rows.length; i += 3) {
    k.push(rows[i]); w.push(rows[i + 1]); vg.push(rows[i + 2]);
  }
  const top = Math.max(...w, ...vg.map(Math.abs)) * 1.1;
  const sx = (x) => 10 + (x / Math.PI) * (canvas.width - 20);
  const sy = (y) => canvas.height / 2 - (y / top) * (canvas.height / 2 - 10);
  polyline(ctx, [sx(0), sx(Math.PI)], [sy(0), sy(0)], "#bbb");
  polyline(ctx, k.map(sx), w.map(sy), "#1f5fbf");
  polyline(ctx, k.map(sx), vg.map(sy), "#c2561a");
  out.textContent = `omega (blue), group velocity (orange); max signal speed ${maxSignalSpeed($("disp-hops").value).toFixed(6)}`;
}

let chain = null;
let running = true;

function resetChain() {
  chain?.free();
  chain = report($("chain-out"), () => new ChainDemo(600, $("chain-hops").value));
  if (chain) chain.kick(300, 1.0);
}

function drawChain() {
  const canvas = $("chain");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!chain) return;
  const u = chain.displacements();
  const scale = Math.max(1e-9, ...Array.from(u, Math.abs));
  const xs = Array.from(u, (_, i) => (i / (u.length - 1)) * canvas.width);
  polyline(ctx, xs, Array.from(u, (y) => canvas.height / 2 - (y / scale) * (canvas.height / 2 - 10)), "#1f5fbf");
  const reach = chain.maxSignalSpeed() * chain.time();
  ctx.fillStyle = "rgba(194, 86, 26, 0.15)";
  const half = (reach / u.length) * canvas.width;
  ctx.fillRect(canvas.width / 2 - half, 0, 2 * half, canvas.height);
  $("chain-out").textContent = `t = ${chain.time().toFixed(2)}, energy = ${chain.energy().toFixed(8)}, shaded: fastest signal cone`;
}

function tick() {
  if (chain && running) report($("chain-out"), () => chain.advance(0.5));
  drawChain();
  requestAnimationFrame(tick);
}

function drawRadar() {
  const canvas = $("radar");
  const ctx = canvas.getContext("2d");
  const out = $("radar-out");
  const v = Number($("radar-v").value);
  const eps = Number($("radar-eps").value);
  const lines = 9, samples = 40;
  const rows = report(out, () => radarGrid(v, 1.0, eps, lines, samples));
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!rows) return;
  const s = canvas.width / 5;
  const px = (x) => canvas.width / 2 + x * s;
  const py = (t) => canvas.height / 2 - t * s;
  polyline(ctx, [px(-2.5), px(2.5)], [py(-2.5), py(2.5)], "#ddd");
  polyline(ctx, [px(-2.5), px(2.5)], [py(2.5), py(-2.5)], "#ddd");
  // rows hold (ct, x, c tau, xi); each grid line has `samples` events,
  // alternating between lines of constant ct and constant x.
  for (let line = 0; line < lines; line++) {
    for (const parity of [0, 1]) {
      const xs = [], ys = [];
      for (let j = 0; j < samples; j++) {
        const r = 4 * (2 * (line * samples + j) + parity);
        xs.push(px(rows[r + 3])); ys.push(py(rows[r + 2]));
      }
      polyline(ctx, xs, ys, parity ? "#1f5fbf" : "#c2561a");
    }
  }
  const fit = frameFit(v, 1.0, eps);
  const m = fit.slice(0, 4).map((x) => x.toFixed(4));
  out.textContent = `fitted [[${m[0]}, ${m[1]}], [${m[2]}, ${m[3]}]], Lorentz m00 ${fit[7].toFixed(4)}, interval defect ${fit[6].toExponential(2)}`;
}

await init();
$("disp-hops").addEventListener("input", drawDispersion);
$("chain-hops").addEventListener("change", resetChain);
$("chain-kick").addEventListener("click", () => report($("chain-out"), () => chain?.kick(300, 1.0)));
$("chain-run").addEventListener("click", (e) => {
  running = !running;
  e.target.textContent = running ? "pause" : "run";
});
$("radar-v").addEventListener("input", drawRadar);
$("radar-eps").addEventListener("input", drawRadar);
drawDispersion();
resetChain();
drawRadar();
tick();
