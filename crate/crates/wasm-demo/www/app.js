// Demo page wiring. Expects the wasm-pack output in ./pkg (see the README:
// wasm-pack build --target web --out-dir www/pkg crates/wasm-demo).
import init, { parse_turtle_json, run_query_json, forecast_json } from "./pkg/artemis_kg_demo.js";

const $ = (id) => document.getElementById(id);

const PRESETS = {
  owned: `SELECT ?infrastructure WHERE {
  ?infrastructure artemis:ownedBy artemis-data:org/elektroco .
  ?infrastructure a artemis:Plant .
}`,
  weather: `SELECT ?ts ?temperature ?windSpeed ?irradiance WHERE {
  ?obs a artemis:WeatherObservation .
  ?obs artemis:city "Belgrade" .
  ?obs artemis:timestamp ?ts .
  ?obs artemis:temperatureC ?temperature .
  ?obs artemis:windSpeedMs ?windSpeed .
  ?obs artemis:ghiWm2 ?irradiance .
}
ORDER BY DESC(?ts) LIMIT 1`,
  production: `SELECT ?ts ?kw WHERE {
  ?obs artemis:aboutPlant artemis-data:plant/12_plant-a_belgrade .
  ?obs artemis:timestamp ?ts .
  ?obs artemis:hasActivePowerKw ?kw .
  FILTER(?ts >= "2021-05-20T06:00:00Z"^^xsd:dateTime)
  FILTER(?ts <= "2021-05-20T09:00:00Z"^^xsd:dateTime)
}
ORDER BY ?ts`,
  closure: `SELECT ?x WHERE { ?x a seas:FeatureOfInterest }`,
};

function renderTable(container, vars, rows) {
  if (!rows.length) {
    container.innerHTML = '<p class="meta">no rows</p>';
    return;
  }
  const head = vars.map((v) => `<th>?${v}</th>`).join("");
  const body = rows
    .map((r) => `<tr>${r.map((c) => `<td>${escapeHtml(c)}</td>`).join("")}</tr>`)
    .join("");
  container.innerHTML = `<div class="scroll"><table><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table></div><p class="meta">${rows.length} row(s)</p>`;
}

function escapeHtml(s) {
  return String(s).replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" }[c]));
}

function doParse() {
  const out = $("parse-out");
  const result = JSON.parse(parse_turtle_json($("turtle-input").value));
  if (!result.ok) {
    out.innerHTML = `<p class="error">line ${result.error.line}, column ${result.error.column}: ${escapeHtml(result.error.message)}</p>`;
    return;
  }
  renderTable(out, ["s", "p", "o"], result.triples.map((t) => [t.s, t.p, t.o]));
}

function doQuery() {
  const out = $("query-out");
  const result = JSON.parse(run_query_json($("query-input").value, $("virtual-toggle").checked));
  if (!result.ok) {
    out.innerHTML = `<p class="error">${escapeHtml(result.error)}</p>`;
    return;
  }
  renderTable(out, result.vars, result.rows);
}

function doForecast() {
  const mode = $("fc-mode").value;
  const result = JSON.parse(
    forecast_json(
      mode,
      BigInt($("fc-horizon").value || 120),
      BigInt($("fc-step").value || 15),
      Number($("fc-order").value || 4),
      $("fc-outage").checked,
    ),
  );
  const errorBox = $("fc-error");
  if (!result.ok) {
    errorBox.textContent = result.error;
    $("fc-meta").textContent = "";
    return;
  }
  errorBox.textContent = "";
  const d = result.diagnostics;
  $("fc-meta").textContent =
    `method ${d.method} · training size ${d.training_size} · residual norm ${d.residual_norm.toFixed(3)}` +
    ` · coefficients [${d.coefficients.map((c) => c.toFixed(4)).join(", ")}]`;
  drawChart(result.history, result.points);
}

function drawChart(history, points) {
  const svg = $("fc-chart");
  const W = 960, H = 280, PAD = 34;
  const all = history.concat(points);
  const times = all.map((p) => Date.parse(p.ts));
  const tMin = Math.min(...times), tMax = Math.max(...times);
  const kwMax = Math.max(...all.map((p) => p.kw), 1) * 1.08;
  const x = (t) => PAD + ((Date.parse(t) - tMin) / (tMax - tMin || 1)) * (W - 2 * PAD);
  const y = (kw) => H - PAD - (kw / kwMax) * (H - 2 * PAD);
  const path = (pts) => pts.map((p, i) => `${i ? "L" : "M"}${x(p.ts).toFixed(1)},${y(p.kw).toFixed(1)}`).join(" ");

  let parts = [];
  // Axis lines and a few ticks.
  parts.push(`<line x1="${PAD}" y1="${H - PAD}" x2="${W - PAD}" y2="${H - PAD}" stroke="#cbd2d9"/>`);
  parts.push(`<line x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${H - PAD}" stroke="#cbd2d9"/>`);
  for (let i = 0; i <= 4; i++) {
    const kw = (kwMax * i) / 4;
    parts.push(`<text x="4" y="${y(kw) + 4}" font-size="10" fill="#5f6b7a">${kw.toFixed(0)}</text>`);
    parts.push(`<line x1="${PAD}" y1="${y(kw)}" x2="${W - PAD}" y2="${y(kw)}" stroke="#eef1f4"/>`);
  }
  // Outage blocks in the history.
  history.forEach((p) => {
    if (p.outage) {
      parts.push(`<rect x="${x(p.ts) - 2}" y="${PAD}" width="4" height="${H - 2 * PAD}" fill="#ffe3e3"/>`);
    }
  });
  parts.push(`<path d="${path(history)}" fill="none" stroke="#1c2733" stroke-width="1.4"/>`);
  parts.push(`<path d="${path(points)}" fill="none" stroke="#0b7285" stroke-width="2" stroke-dasharray="6 3"/>`);
  points.forEach((p) => {
    parts.push(`<circle cx="${x(p.ts)}" cy="${y(p.kw)}" r="2.5" fill="#0b7285"/>`);
  });
  parts.push(`<text x="${W - PAD - 170}" y="${PAD - 8}" font-size="11" fill="#1c2733">— observed&#160;&#160;</text>`);
  parts.push(`<text x="${W - PAD - 90}" y="${PAD - 8}" font-size="11" fill="#0b7285">- - forecast</text>`);
  svg.innerHTML = parts.join("");
}

async function main() {
  await init();
  $("parse-btn").onclick = doParse;
  $("query-btn").onclick = doQuery;
  $("fc-btn").onclick = doForecast;
  document.querySelectorAll("[data-preset]").forEach((btn) => {
    btn.onclick = () => {
      $("query-input").value = PRESETS[btn.dataset.preset];
      doQuery();
    };
  });
  $("fc-mode").onchange = () => {
    const dayAhead = $("fc-mode").value === "day-ahead";
    ["fc-horizon", "fc-step", "fc-order"].forEach((id) => ($(id).disabled = dayAhead));
  };
  doParse();
  doQuery();
  doForecast();
}

main();
