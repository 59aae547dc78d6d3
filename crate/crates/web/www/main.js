import init, {
  evolve_nz,
  pendulum_nz,
  eigenstate_scan,
  scan_fields,
  separatrix_energy,
  husimi_eigenstate,
} from "./pkg/lr_staggered_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const status = (msg) => { $("status").textContent = msg; };

function model() {
  return [num("J"), num("h"), Math.round(num("n"))];
}

// Maps data coordinates to a canvas with a small margin.
function frame(canvas, xr, yr) {
  const m = 36;
  const w = canvas.width - 2 * m, h = canvas.height - 2 * m;
  return {
    x: (v) => m + ((v - xr[0]) / (xr[1] - xr[0])) * w,
    y: (v) => m + h - ((v - yr[0]) / (yr[1] - yr[0])) * h,
    inv: (px, py) => [xr[0] + ((px - m) / w) * (xr[1] - xr[0]), yr[0] + ((m + h - py) / h) * (yr[1] - yr[0])],
    m, w, h,
  };
}

function axes(ctx, f, xr, yr, xl, yl) {
  ctx.strokeStyle = "#888";
  ctx.strokeRect(f.m, f.m, f.w, f.h);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(1), f.m, f.m + f.h + 14);
  ctx.fillText(xr[1].toFixed(1), f.m + f.w - 24, f.m + f.h + 14);
  ctx.fillText(yr[1].toFixed(2), 2, f.m + 4);
  ctx.fillText(yr[0].toFixed(2), 2, f.m + f.h);
  ctx.fillText(xl, f.m + f.w / 2 - 10, f.m + f.h + 28);
  ctx.fillText(yl, 2, f.m - 10);
}

function line(ctx, f, xs, ys, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.2;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(f.x(x), f.y(ys[i])) : ctx.moveTo(f.x(x), f.y(ys[i]))));
  ctx.stroke();
}

function runEvolve() {
  const [J, h, n] = model();
  const th = num("theta"), sigma = num("sigma"), tmax = num("tmax");
  const points = 1200;
  const q = evolve_nz(J, h, n, th, sigma, tmax, points);
  const cl = pendulum_nz(J, h, n, th, tmax, points);
  const ts = Array.from(q, (_, i) => (tmax * i) / (points - 1));
  const c = $("evolve"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const f = frame(c, [0, tmax], [-1, 1]);
  axes(ctx, f, [0, tmax], [-1, 1], "t", "n^z");
  line(ctx, f, ts, cl, "#d08a00");
  line(ctx, f, ts, q, "#1f5fbf");
}

let scan = null;

function drawScan() {
  if (!scan) return;
  const c = $("scan"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const { rows, es } = scan;
  const keep = rows.filter((r) => !$("filter").checked || r.s2 < 0.2);
  const e = keep.map((r) => r.e), s = keep.map((r) => r.s);
  const xr = [Math.min(...e), Math.max(...e)], yr = [0, Math.max(...s, 1e-9)];
  const f = frame(c, xr, yr);
  scan.frame = f;
  scan.shown = keep;
  axes(ctx, f, xr, yr, "E", "S (nats)");
  ctx.fillStyle = "rgba(31,95,191,0.55)";
  for (const r of keep) ctx.fillRect(f.x(r.e) - 1.5, f.y(r.s) - 1.5, 3, 3);
  ctx.setLineDash([4, 3]);
  ctx.strokeStyle = "#c33";
  ctx.beginPath();
  ctx.moveTo(f.x(es), f.m);
  ctx.lineTo(f.x(es), f.m + f.h);
  ctx.stroke();
  ctx.setLineDash([]);
}

function runScan() {
  const [J, h, n] = model();
  const flat = eigenstate_scan(J, h, n);
  const k = scan_fields();
  const rows = [];
  for (let i = 0; i < flat.length; i += k) {
    rows.push({ m: flat[i], index: flat[i + 1], e: flat[i + 2], nz: flat[i + 3], s2: flat[i + 4], s: flat[i + 5] });
  }
  scan = { rows, es: separatrix_energy(J, h, n), model: [J, h, n] };
  drawScan();
}

function pick(ev) {
  if (!scan || !scan.frame) return;
  const rect = ev.target.getBoundingClientRect();
  const px = ev.clientX - rect.left, py = ev.clientY - rect.top;
  let best = null, dist = Infinity;
  for (const r of scan.shown) {
    const d = (scan.frame.x(r.e) - px) ** 2 + (scan.frame.y(r.s) - py) ** 2;
    if (d < dist) { dist = d; best = r; }
  }
  if (best) drawHusimi(best);
}

function drawHusimi(r) {
  const [J, h, n] = scan.model;
  const nt = 96, ng = 72;
  const q = husimi_eigenstate(J, h, n, r.m, r.index, nt, ng);
  $("picked").textContent =
    `m = ${r.m}, index ${r.index}, E = ${r.e.toFixed(3)}, S = ${r.s.toFixed(3)}, <n^z> = ${r.nz.toFixed(3)}`;
  const c = $("husimi"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const f = frame(c, [0, 2 * Math.PI], [-Math.PI, Math.PI]);
  const qmax = Math.max(...q, 1e-300);
  const cw = f.w / nt, ch = f.h / ng;
  for (let i = 0; i < nt; i++) {
    for (let k = 0; k < ng; k++) {
      const v = Math.sqrt(q[i * ng + k] / qmax);
      ctx.fillStyle = `rgb(${Math.round(255 * v)}, ${Math.round(90 * v)}, ${Math.round(60 + 120 * (1 - v))})`;
      ctx.fillRect(f.m + i * cw, f.m + f.h - (k + 1) * ch, cw + 0.5, ch + 0.5);
    }
  }
  axes(ctx, f, [0, 2 * Math.PI], [-Math.PI, Math.PI], "θ", "γ");
}

function guarded(fn) {
  return (...args) => {
    status("");
    try { fn(...args); } catch (e) { status(String(e.message ?? e)); }
  };
}

await init();
$("run-evolve").addEventListener("click", guarded(runEvolve));
$("run-scan").addEventListener("click", guarded(runScan));
$("filter").addEventListener("change", guarded(drawScan));
$("scan").addEventListener("click", guarded(pick));
