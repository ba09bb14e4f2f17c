import init, { Explorer, preset } from "./pkg/anharmonic_wasm_demo.js";

const $ = (id) => document.getElementById(id);
let ex = null;
let grid = [];

function plot(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: W, height: H } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, W, H);
  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s) => s.y);
  const [x0, x1] = opts.xRange ?? [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y0 === y1) [y0, y1] = [y0 - 1, y1 + 1];
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (W - 2 * pad);
  const py = (y) => H - pad - ((y - y0) / (y1 - y0)) * (H - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(x0.toPrecision(3), pad, H - pad + 14);
  ctx.fillText(x1.toPrecision(3), W - pad - 30, H - pad + 14);
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
  ctx.fillText(y0.toPrecision(3), 2, H - pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    s.x.forEach((x, i) => {
      if (x < x0 || x > x1) return;
      const [u, v] = [px(x), py(s.y[i])];
      if (i === 0 || s.x[i - 1] < x0) ctx.moveTo(u, v);
      else if (s.step) ctx.lineTo(u, py(s.y[i - 1])), ctx.lineTo(u, v);
      else ctx.lineTo(u, v);
    });
    ctx.stroke();
  }
}

// visible x-range: where any trusted mode is non-negligible
function xRange() {
  const u = ex.eigenfunction(ex.trusted() - 1);
  let lo = 0;
  while (lo < u.length && Math.abs(u[lo]) < 1e-6) lo++;
  return [grid[lo], -grid[lo]];
}

function drawMode() {
  const j = Number($("mode").value);
  const u = ex.eigenfunction(j);
  const lam = ex.eigenvalues()[j];
  $("mode-out").textContent = `j = ${j + 1}, λ = ${lam.toFixed(6)}`;
  plot($("eig"), [{ x: grid, y: Array.from(u), color: "#1f5fa8" }], { xRange: xRange() });
}

function drawHeat() {
  const c = Number($("center").value);
  const w = Number($("width").value);
  const t = 10 ** Number($("logt").value);
  try {
    const f0 = ex.heat(c, w, 0);
    const ft = ex.heat(c, w, t);
    const n = grid.length;
    $("heat-out").textContent = `t = ${t.toExponential(2)}, ‖P f‖ = ${f0[n].toFixed(5)}, ‖e^(−tA) f‖ = ${ft[n].toFixed(5)}`;
    plot(
      $("heat"),
      [
        { x: grid, y: Array.from(f0.slice(0, n)), color: "#bbb" },
        { x: grid, y: Array.from(ft.slice(0, n)), color: "#c0392b" },
      ],
      { xRange: xRange() },
    );
  } catch (e) {
    $("heat-out").textContent = String(e);
  }
}

function drawCounting() {
  const lams = Array.from(ex.eigenvalues());
  const x = lams.map(Math.log);
  const y = lams.map((_, i) => Math.log(i + 1));
  let text = `target slope ${ex.weyl_target().toFixed(3)}`;
  try {
    text = `fitted slope ${ex.weyl_slope().toFixed(4)}, ${text}`;
  } catch (e) {
    text = `${e}; ${text}`;
  }
  $("weyl-out").textContent = `${text}, J_ok = ${lams.length}`;
  plot($("count"), [{ x, y, color: "#27774a", step: true }]);
}

function solve() {
  const k = Number($("k").value);
  const l = Number($("l").value);
  const [L, N, J] = preset(k, l);
  $("status").textContent = "solving…";
  // let the status paint before the solve blocks the thread
  setTimeout(() => {
    try {
      const t0 = performance.now();
      ex?.free();
      ex = new Explorer(k, l, L, N, J);
      grid = Array.from(ex.grid());
      $("mode").max = ex.trusted() - 1;
      $("mode").value = 0;
      $("status").textContent = `L = ${L}, N = ${N}: ${ex.trusted()} trusted modes in ${(performance.now() - t0).toFixed(0)} ms`;
      drawMode();
      drawHeat();
      drawCounting();
    } catch (e) {
      $("status").textContent = String(e);
    }
  }, 0);
}

await init();
$("solve").onclick = solve;
$("mode").oninput = drawMode;
for (const id of ["center", "width", "logt"]) $(id).oninput = drawHeat;
solve();
