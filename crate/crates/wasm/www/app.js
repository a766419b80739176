import init, { spectrum, construct, list_examples, run_example } from "./pkg/fewweight_wasm.js";

const $ = (id) => document.getElementById(id);
const field = () => [Number($("p").value), Number($("m").value), $("modulus").value];

function guard(out, f) {
  try {
    out.classList.remove("bad");
    f();
  } catch (e) {
    out.textContent = String(e);
    out.classList.add("bad");
  }
}

function drawPlane(dist, p, m) {
  const c = $("plane");
  const g = c.getContext("2d");
  const w = c.width, h = c.height, mid = w / 2;
  g.clearRect(0, 0, w, h);
  g.strokeStyle = "#ccc";
  g.beginPath();
  g.moveTo(0, mid); g.lineTo(w, mid);
  g.moveTo(mid, 0); g.lineTo(mid, h);
  g.stroke();
  const reach = Math.max(1, ...dist.map((d) => Math.hypot(d.re, d.im)));
  const scale = (mid - 20) / reach;
  // circle |W| = p^{m/2}, where bent values sit
  g.strokeStyle = "#9bd";
  g.beginPath();
  g.arc(mid, mid, Math.pow(p, m / 2) * scale, 0, 2 * Math.PI);
  g.stroke();
  const most = Math.max(...dist.map((d) => d.count));
  g.fillStyle = "rgba(30, 80, 200, 0.75)";
  for (const d of dist) {
    const r = 3 + 9 * Math.sqrt(d.count / most);
    g.beginPath();
    g.arc(mid + d.re * scale, mid - d.im * scale, r, 0, 2 * Math.PI);
    g.fill();
  }
}

function drawBars(dist) {
  const c = $("bars");
  const g = c.getContext("2d");
  const w = c.width, h = c.height, pad = 30;
  g.clearRect(0, 0, w, h);
  if (dist.length === 0) return;
  const maxW = dist[dist.length - 1][0];
  const maxA = Math.max(...dist.map(([, a]) => a));
  const bw = Math.max(4, Math.min(40, (w - 2 * pad) / (dist.length * 2)));
  g.font = "11px system-ui";
  g.textAlign = "center";
  for (const [wt, a] of dist) {
    const x = pad + (wt / maxW) * (w - 2 * pad - bw);
    const bh = (a / maxA) * (h - 2 * pad);
    g.fillStyle = "#3a7";
    g.fillRect(x, h - pad - bh, bw, bh);
    g.fillStyle = "#222";
    g.fillText(String(a), x + bw / 2, h - pad - bh - 4);
    g.fillText(String(wt), x + bw / 2, h - pad + 14);
  }
}

$("run-spectrum").onclick = () => guard($("spectrum-out"), () => {
  const [p, m, modulus] = field();
  const v = JSON.parse(spectrum(p, m, modulus, $("fn").value));
  const r = v.report;
  const lines = [
    `modulus        ${v.modulus}`,
    `classification ${r.classification}`,
    `parseval       ${r.parseval ? "ok" : "FAILED"}`,
  ];
  if (r.prediction) {
    const c = r.prediction;
    lines.push(`closed form    ${!c.applicable ? "not applicable" : c.matched ? "match" : `MISMATCH at ${c.mismatches}`} (${c.note})`);
  }
  for (const d of r.distribution) lines.push(`  ${d.value.padStart(24)}  x${d.count}`);
  $("spectrum-out").textContent = lines.join("\n");
  drawPlane(r.distribution, p, m);
});

$("run-construct").onclick = () => guard($("construct-out"), () => {
  const [p, m, modulus] = field();
  const v = JSON.parse(construct(p, m, modulus, $("fn").value, $("set").value));
  const r = v.report;
  if (!r.summary) {
    $("construct-out").textContent = `defining set ${r.set} is empty`;
    drawBars([]);
    return;
  }
  $("construct-out").textContent = [
    `defining set ${r.set} (${r.set_size} elements, ${r.method} path)`,
    `code         ${r.params}`,
    `enumerator   ${r.enumerator}`,
    `griesmer     ${r.griesmer_optimal ? "optimal" : `bound allows d = ${r.griesmer_max_d}`}`,
    `pless        ${"Ok" in r.pless ? "ok" : r.pless.Err}`,
  ].join("\n");
  drawBars(r.summary.dist);
});

$("run-example").onclick = () => guard($("example-out"), () => {
  const v = JSON.parse(run_example($("example").value));
  const o = v.outcome;
  const lines = [`F_${o.p}^${o.m}, modulus ${o.modulus}, ${o.function}`];
  for (const part of o.parts) {
    lines.push(`${part.label ? part.label + ": " : ""}${part.got_params} ${part.got_enumerator} ${part.matched ? "(matches)" : "(expected " + part.expected_enumerator + ")"}`);
  }
  $("example-out").textContent = lines.join("\n");
  $("example-out").className = v.matched ? "good" : "bad";
});

await init();
for (const e of JSON.parse(list_examples())) {
  const opt = document.createElement("option");
  opt.value = e.id;
  opt.textContent = `${e.id}  (p = ${e.p}, m = ${e.m})`;
  $("example").append(opt);
}
