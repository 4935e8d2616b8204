import init, {
  target_points, published_prescribed, published_free, trace_curve, evaluate, Synthesizer,
} from "./pkg/spherical_synth_web.js";

const canvas = document.getElementById("view");
const ctx = canvas.getContext("2d");
const report = document.getElementById("report");
const $ = (id) => document.getElementById(id);

let yaw = 0.6, pitch = -0.4;
let scene = { targets: [], curve: [], generated: [] };
let synth = null;
let running = false;

function triples(flat) {
  const out = [];
  for (let i = 0; i < flat.length; i += 3) out.push([flat[i], flat[i + 1], flat[i + 2]]);
  return out;
}

function project([x, y, z]) {
  const cy = Math.cos(yaw), sy = Math.sin(yaw), cp = Math.cos(pitch), sp = Math.sin(pitch);
  const x1 = cy * x + sy * y, y1 = -sy * x + cy * y;
  const y2 = cp * y1 - sp * z, z2 = sp * y1 + cp * z;
  const r = canvas.width * 0.45;
  return [canvas.width / 2 + r * y2, canvas.height / 2 - r * z2, x1];
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.arc(canvas.width / 2, canvas.height / 2, canvas.width * 0.45, 0, 2 * Math.PI);
  ctx.stroke();

  ctx.strokeStyle = "#1f5fbf";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  let pen = false;
  for (const p of scene.curve) {
    if (Number.isNaN(p[0])) { pen = false; continue; }
    const [u, v] = project(p);
    pen ? ctx.lineTo(u, v) : ctx.moveTo(u, v);
    pen = true;
  }
  ctx.stroke();

  const dots = (pts, color, size) => {
    for (const p of pts) {
      if (Number.isNaN(p[0])) continue;
      const [u, v, depth] = project(p);
      ctx.fillStyle = color;
      ctx.globalAlpha = depth >= 0 ? 1 : 0.35;
      ctx.fillRect(u - size / 2, v - size / 2, size, size);
    }
    ctx.globalAlpha = 1;
  };
  dots(scene.targets, "#c0392b", 5);
  dots(scene.generated, "#27ae60", 3);
}

function summarize(e, extra = "") {
  const a = Array.from(e.link_lengths).map((x) => x.toFixed(6)).join(", ");
  report.textContent =
    `${extra}f_ob = ${e.f_ob.toExponential(4)}\nfeasible = ${e.feasible}\n` +
    `link lengths = ${a}\ngrashof = ${e.grashof}`;
}

function show(design, free, stride) {
  try {
    const e = evaluate(Float64Array.from(design), free, stride);
    scene = {
      targets: triples(target_points(stride)),
      curve: triples(trace_curve(Float64Array.from(design), free, 720)),
      generated: triples(e.generated),
    };
    summarize(e);
    e.free();
  } catch (err) {
    report.textContent = `error: ${err.message ?? err}`;
  }
  draw();
}

function showPublished(free) {
  const design = free ? published_free() : published_prescribed();
  $("eval-free").checked = free;
  $("vector").value = Array.from(design).join(", ");
  show(design, free, 1);
}

function frame() {
  if (!running || !synth) return;
  const best = synth.step(20);
  const stride = Number($("stride").value);
  const free = $("syn-free").checked;
  try {
    const design = synth.best_design();
    const e = synth.best_evaluation();
    scene = {
      targets: triples(target_points(stride)),
      curve: e.feasible ? triples(trace_curve(design, free, 360)) : [],
      generated: triples(e.generated),
    };
    summarize(e, `generation ${synth.generation}, best ${best.toExponential(4)}\n`);
    e.free();
    $("vector").value = Array.from(design).join(", ");
    $("eval-free").checked = free;
  } catch (err) {
    report.textContent = `generation ${synth.generation}: ${err.message ?? err}`;
  }
  draw();
  if (synth.finished) running = false;
  else requestAnimationFrame(frame);
}

function start() {
  if (synth) synth.free();
  try {
    synth = new Synthesizer(
      $("syn-free").checked, Number($("stride").value), Number($("pop").value),
      Number($("gens").value), Number($("cr").value), BigInt($("seed").value),
    );
  } catch (err) {
    report.textContent = `error: ${err.message ?? err}`;
    return;
  }
  running = true;
  requestAnimationFrame(frame);
}

let drag = null;
canvas.addEventListener("pointerdown", (e) => { drag = [e.clientX, e.clientY]; canvas.setPointerCapture(e.pointerId); });
canvas.addEventListener("pointerup", () => { drag = null; });
canvas.addEventListener("pointermove", (e) => {
  if (!drag) return;
  yaw += (e.clientX - drag[0]) * 0.01;
  pitch += (e.clientY - drag[1]) * 0.01;
  drag = [e.clientX, e.clientY];
  draw();
});

await init();
$("show-prescribed").onclick = () => showPublished(false);
$("show-free").onclick = () => showPublished(true);
$("evaluate").onclick = () => {
  const values = $("vector").value.split(/[\s,]+/).filter(Boolean).map(Number);
  show(values, $("eval-free").checked, 1);
};
$("start").onclick = start;
$("stop").onclick = () => { running = false; };
showPublished(false);
