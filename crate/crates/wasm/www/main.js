import init, { success_curve, propulsion_curve, propulsion_summary, delay_curve } from "./pkg/uplink_wasm.js";

const $ = (id) => document.getElementById(id);
const status = $("status");

// split a flat [x, y0, y1, ..., x, y0, ...] array into columns
function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  for (let i = 0; i < flat.length; i++) cols[i % width].push(flat[i]);
  return cols;
}

function plot(canvas, xs, series, { ymin, ymax, xlabel, ylabel }) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, L = 50, B = 30, T = 10, R = 10;
  ctx.clearRect(0, 0, W, H);
  const finite = series.flatMap((s) => s.ys).filter(Number.isFinite);
  const lo = ymin ?? Math.min(...finite), hi = ymax ?? Math.max(...finite);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => L + ((x - x0) / (x1 - x0 || 1)) * (W - L - R);
  const py = (y) => H - B - ((y - lo) / (hi - lo || 1)) * (H - B - T);

  ctx.strokeStyle = "#999"; ctx.fillStyle = "#444"; ctx.font = "11px sans-serif";
  ctx.beginPath(); ctx.moveTo(L, T); ctx.lineTo(L, H - B); ctx.lineTo(W - R, H - B); ctx.stroke();
  for (let k = 0; k <= 4; k++) {
    const y = lo + (k / 4) * (hi - lo);
    ctx.fillText(y.toPrecision(3), 2, py(y) + 4);
    const x = x0 + (k / 4) * (x1 - x0);
    ctx.fillText(x.toPrecision(3), px(x) - 10, H - B + 14);
  }
  ctx.fillText(xlabel, W - R - 80, H - 2);
  ctx.fillText(ylabel, L + 4, T + 10);

  for (const s of series) {
    ctx.strokeStyle = s.color; ctx.lineWidth = 2; ctx.beginPath();
    let pen = false;
    xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
  }
}

function guard(f) {
  try { f(); status.textContent = ""; } catch (e) { status.textContent = String(e); }
}

function drawSuccess() {
  guard(() => {
    const env = $("s-env").value, h = +$("s-h").value;
    $("s-h-v").textContent = h;
    const [xs, urdc] = columns(success_curve(env, "urdc", h, -20, 60, 2), 2);
    const [, suc] = columns(success_curve(env, "suc", h, -20, 60, 2), 2);
    plot($("success"), xs, [{ ys: urdc, color: "#1f77b4" }, { ys: suc, color: "#ff7f0e" }],
      { ymin: 0, ymax: 1, xlabel: "threshold (dB)", ylabel: "P(success)" });
  });
}

function drawPower() {
  guard(() => {
    const vmax = +$("p-v").value;
    $("p-v-v").textContent = vmax;
    const [xs, ps] = columns(propulsion_curve(vmax, 0.5), 2);
    plot($("power"), xs, [{ ys: ps, color: "#2ca02c" }], { ymin: 0, xlabel: "speed (m/s)", ylabel: "W" });
    const [hover, vstar] = propulsion_summary();
    $("p-note").textContent = `hover ${hover.toFixed(1)} W, minimum power at ${vstar.toFixed(2)} m/s`;
  });
}

function drawDelay() {
  guard(() => {
    const m = Math.max(2, Math.min(40, +$("d-m").value || 12));
    const [xs, , w] = columns(delay_curve($("d-env").value, $("d-scheme").value, 30, m), 3);
    plot($("delay"), xs, [{ ys: w, color: "#d62728" }], { xlabel: "packet (Mbit)", ylabel: "slots" });
  });
}

await init();
for (const id of ["s-env", "s-h"]) $(id).addEventListener("input", drawSuccess);
$("p-v").addEventListener("input", drawPower);
for (const id of ["d-env", "d-scheme", "d-m"]) $(id).addEventListener("input", drawDelay);
drawSuccess(); drawPower(); drawDelay();
