/** DOM wiring: renders the store, forwards clicks to it.

The page is a protocol terminal: next-bar stepping, a zone form whose bar
picker only offers served bars, the ledger with entry hashes, seal/reveal,
verification badges, and the scoring table. */

import { ApiClient } from "./api.js";
import { drawChart } from "./chart.js";
import { ConsoleStore, SessionViewState } from "./state.js";
import type { MetricsReport, PredictionOutcome } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function fmtRR(o: PredictionOutcome): string {
  return o.no_adverse ? "no-adverse" : o.rr === null ? "-" : o.rr.toFixed(2);
}

function renderReport(report: MetricsReport | null): string {
  if (!report) return "";
  const rows = report.records
    .map(
      (r) =>
        `<tr><td>${r.bar_index}</td><td>${r.direction}</td>` +
        `<td>${r.mfe.toFixed(5)}</td><td>${r.mae.toFixed(5)}</td>` +
        `<td>${fmtRR(r)}</td>` +
        `<td class="${r.hit ? "hit" : "miss"}">${r.hit ? "hit" : "miss"}</td>` +
        `<td>${r.truncated ? "yes" : ""}</td></tr>`,
    )
    .join("");
  const hitRate = report.hit_rate === null ? "-" : (report.hit_rate * 100).toFixed(0) + "%";
  return (
    `<table><thead><tr><th>bar</th><th>dir</th><th>MFE</th><th>MAE</th>` +
    `<th>R/R</th><th>hit</th><th>trunc</th></tr></thead><tbody>${rows}</tbody></table>` +
    `<p>hit rate ${hitRate} | series drawdown ` +
    `${(report.max_drawdown_over_series * 100).toFixed(2)}%</p>`
  );
}

function badge(label: string, ok: boolean): string {
  return `<span class="badge ${ok ? "ok" : "bad"}">${label}: ${ok ? "ok" : "FAILED"}</span>`;
}

export function mountConsole(baseUrl: string, totalSlots = 120): ConsoleStore {
  const api = new ApiClient(baseUrl);
  const store = new ConsoleStore(api);

  const canvas = el<HTMLCanvasElement>("chart");
  const ctx = canvas.getContext("2d")!;

  const render = (state: SessionViewState) => {
    el("cursor-label").textContent = String(state.bars.length);
    el("commitment").textContent = state.commitment ?? "-";
    el("banner").innerHTML = state.banner
      ? `<div class="banner">${state.banner.code}: ${state.banner.message}</div>`
      : "";

    const picker = el<HTMLSelectElement>("bar-picker");
    const options = store
      .selectableBars()
      .map((i) => `<option value="${i}">bar ${i}</option>`)
      .reverse()
      .join("");
    if (picker.innerHTML !== options) picker.innerHTML = options;

    (el<HTMLButtonElement>("next-bar")).disabled = state.sealed || state.revealed || state.endOfStream;
    (el<HTMLButtonElement>("mark-zone")).disabled = state.revealed || state.bars.length === 0;
    (el<HTMLButtonElement>("seal")).disabled = state.revealed || state.sessionId === null;
    (el<HTMLButtonElement>("reveal")).disabled = state.revealed || state.sessionId === null;

    el("ledger").innerHTML = state.ledger
      .map(
        (e, i) =>
          `<li>#${i} bar ${e.bar_index} ${e.expected_direction}` +
          (e.note ? ` "${e.note}"` : "") +
          ` <code>${e.entry_hash}</code></li>`,
      )
      .join("");

    if (state.revealed && state.manifest && state.verification) {
      const v = state.verification;
      el("verification").innerHTML =
        badge("chain", v.chain_ok) +
        badge("commitment", v.commitment_ok) +
        badge("no-lookahead", v.lookahead_ok) +
        (v.first_broken_link !== null ? ` first broken link: ${v.first_broken_link}` : "");
      const m = state.manifest;
      el("manifest").textContent =
        `${m.symbol} ${m.timeframe}  ${m.start_timestamp} .. ${m.end_timestamp}  ` +
        `a=${m.affine_a} b=${m.affine_b} seed=${m.rng_seed}`;
    } else {
      el("verification").innerHTML = "";
      el("manifest").textContent = "(sealed until reveal)";
    }

    el("report").innerHTML = renderReport(state.report);

    drawChart(
      ctx,
      state.bars,
      state.ledger.map((e) => ({ bar_index: e.bar_index, expected_direction: e.expected_direction })),
      undefined,
      state.revealed && state.manifest
        ? { manifest: state.manifest, outcomes: state.report?.records ?? [] }
        : null,
      totalSlots,
    );
  };

  store.subscribe(render);
  render(store.getState());

  el("start").addEventListener("click", () => {
    const seed = Number(el<HTMLInputElement>("seed").value || "1");
    const csvPath = el<HTMLInputElement>("csv-path").value.trim();
    void store.startSession(csvPath ? { csv_path: csvPath, seed } : { seed });
  });
  el("next-bar").addEventListener("click", () => void store.drawNextBar());
  el("mark-zone").addEventListener("click", () => {
    const picker = el<HTMLSelectElement>("bar-picker");
    const direction = el<HTMLSelectElement>("direction").value as "up" | "down";
    const note = el<HTMLInputElement>("note").value;
    void store.markZone(Number(picker.value), direction, note);
  });
  el("seal").addEventListener("click", () => void store.sealSession());
  el("reveal").addEventListener("click", async () => {
    await store.revealSession();
    if (store.getState().revealed) await store.loadReport();
  });

  return store;
}
