import init, { measure, capacity_sweep, evolve_circuit } from "./pkg/infosynth_web.js";

const $ = (id) => document.getElementById(id);
const f4 = (x) => (x === null || x === undefined ? "n/a" : x.toFixed(4));

function fail(target, e) {
  target.innerHTML = `<p class="err">${String(e)}</p>`;
}

function runMeasure() {
  const out = $("measure-out");
  try {
    const r = JSON.parse(measure($("fn").value));
    let head = "<tr><th>output</th><th>H(f)</th>";
    for (let i = 1; i <= r.inputs; i++) head += `<th>H(f|x${i})</th>`;
    let rows = "";
    r.outputs.forEach((o, j) => {
      rows += `<tr><td>out${j}</td><td>${f4(o.entropy)}</td>`;
      rows += o.conditional.map((c) => `<td>${f4(c)}</td>`).join("") + "</tr>";
    });
    out.innerHTML = `<table>${head}</tr>${rows}</table>
      <p>H(X) = ${f4(r.input_entropy)}, joint H(f) = ${f4(r.joint_entropy)}, I_NW = ${f4(r.network_information)} bits</p>`;
  } catch (e) {
    fail(out, e);
  }
}

function runSweep() {
  const out = $("sweep-out");
  const canvas = $("heat");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  try {
    const r = JSON.parse(capacity_sweep($("lib").value, +$("maxp").value, +$("maxq").value, $("mode").value, $("exact").checked));
    const grid = r.grid;
    const max = Math.max(...grid.flat());
    const pad = 40;
    const cw = (canvas.width - pad) / grid[0].length;
    const ch = (canvas.height - pad) / grid.length;
    ctx.font = "11px monospace";
    grid.forEach((row, p) => {
      row.forEach((v, q) => {
        const t = max > 0 ? v / max : 0;
        ctx.fillStyle = `hsl(${240 - 200 * t}, 70%, ${85 - 45 * t}%)`;
        ctx.fillRect(pad + q * cw, pad + p * ch, cw - 1, ch - 1);
        if (cw > 34) {
          ctx.fillStyle = "#000";
          ctx.fillText(v.toFixed(2), pad + q * cw + 3, pad + p * ch + ch / 2 + 4);
        }
      });
      ctx.fillStyle = "#000";
      ctx.fillText(String(p + 1), 8, pad + p * ch + ch / 2 + 4);
    });
    grid[0].forEach((_, q) => ctx.fillText(String(q + 1), pad + q * cw + cw / 2 - 4, 25));
    ctx.fillText("levels ↓  gates/level →", 8, 12);
    out.innerHTML = `<p>{${r.library}}: I_L = ${f4(r.library_capacity)}, I_G = ${f4(r.cell_capacity)} bits, ${r.mode}, max ${f4(max)} bits</p>`;
  } catch (e) {
    fail(out, e);
  }
}

function plotTrace(r) {
  const canvas = $("trace");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const pts = r.trace;
  if (pts.length === 0) return;
  const pad = 35;
  const xmax = Math.max(1, pts[pts.length - 1][0]);
  const hmax = Math.max(1e-9, ...pts.map((p) => p[3]));
  const tvals = pts.map((p) => p[4]).filter((v) => v !== null);
  const tmax = Math.max(1e-9, ...tvals);
  const x = (e) => pad + (e / xmax) * (canvas.width - 2 * pad);
  const y = (v, m) => canvas.height - pad - (v / m) * (canvas.height - 2 * pad);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad, canvas.width - 2 * pad, canvas.height - 2 * pad);
  const line = (idx, m, color) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    let started = false;
    for (const p of pts) {
      if (p[idx] === null) continue;
      if (!started) ctx.moveTo(x(p[0]), y(p[idx], m));
      else ctx.lineTo(x(p[0]), y(p[idx], m));
      started = true;
    }
    ctx.stroke();
  };
  line(3, hmax, "#c33");
  line(4, tmax, "#36c");
  ctx.fillStyle = "#000";
  ctx.font = "12px sans-serif";
  ctx.fillText(`H_best (red, max ${hmax.toFixed(3)})   T (blue, max ${tmax.toFixed(3)})   x: evaluations up to ${xmax}`, pad, 20);
}

function runEvolve() {
  const out = $("evolve-out");
  $("netlist").textContent = "";
  try {
    const r = JSON.parse(
      evolve_circuit($("fn").value, +$("ep").value, +$("eq").value, $("elib").value, BigInt($("seed").value), BigInt($("evals").value)),
    );
    out.innerHTML = `<p>functionality ${f4(r.functionality)}, ${r.active_gates} gates, ${r.evaluations} evaluations
      (first functional at ${r.first_functional ?? "n/a"}), verified ${r.verified}<br>
      I_NW ${f4(r.network_information)}, work ${f4(r.logical_work)}, Q ${f4(r.information_potential)},
      T ${f4(r.vitality)}, effective capacity ${f4(r.effective_capacity)} bits</p>`;
    plotTrace(r);
    $("netlist").textContent = r.table + "\n" + r.netlist;
  } catch (e) {
    fail(out, e);
  }
}

await init();
$("measure").onclick = runMeasure;
$("sweep").onclick = runSweep;
$("evolve").onclick = runEvolve;
runMeasure();
runSweep();
