import init, { field_curve, equivalence_residual, bridge_summary } from "./pkg/sge_web.js";

const N = 600;
const $ = (id) => document.getElementById(id);

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
}

// series: [{ ys, color, dash }]; all share xs
function plot(canvas, xs, series, { log = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  axes(ctx, w, h, pad);
  const tf = (y) => (log ? Math.log10(Math.max(y, 1e-18)) : y);
  let lo = Infinity, hi = -Infinity;
  for (const s of series) for (const y of s.ys) { lo = Math.min(lo, tf(y)); hi = Math.max(hi, tf(y)); }
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const sx = (x) => pad + ((x - xs[0]) / (xs[xs.length - 1] - xs[0])) * (w - 2 * pad);
  const sy = (y) => h - pad - ((tf(y) - lo) / (hi - lo)) * (h - 2 * pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash || []);
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    s.ys.forEach((y, i) => (i ? ctx.lineTo(sx(xs[i]), sy(y)) : ctx.moveTo(sx(xs[i]), sy(y))));
    ctx.stroke();
  }
  ctx.setLineDash([]);
  ctx.fillStyle = "#333";
  const fmt = (v) => (log ? `1e${v.toFixed(0)}` : v.toFixed(2));
  ctx.fillText(fmt(hi), 2, pad + 4);
  ctx.fillText(fmt(lo), 2, h - pad);
  ctx.fillText(xs[0].toFixed(1), pad, h - 8);
  ctx.fillText(xs[xs.length - 1].toFixed(1), w - pad - 20, h - 8);
}

function redraw() {
  const h = Number($("h").value);
  const span = Number($("span").value);
  $("h-out").textContent = h.toFixed(2);
  $("error").textContent = "";
  const xs = Array.from({ length: N }, (_, i) => -span + (2 * span * i) / (N - 1));
  try {
    const pairs = field_curve(h, -span, span, N);
    const direct = [], theta = [];
    for (let i = 0; i < N; i++) { direct.push(pairs[2 * i]); theta.push(pairs[2 * i + 1]); }
    plot($("field"), xs, [
      { ys: direct, color: "#1f5fbf" },
      { ys: theta, color: "#d0602a", dash: [6, 5] },
    ]);
    plot($("residual"), xs, [{ ys: Array.from(equivalence_residual(h, -span, span, N)), color: "#2a8a3a" }], { log: true });
    $("bridge").textContent = bridge_summary(h);
  } catch (e) {
    $("error").textContent = String(e);
  }
}

await init();
$("h").addEventListener("input", redraw);
$("span").addEventListener("change", redraw);
redraw();
