// DOM shell: builds the panel, wires widgets to the API client, and runs
// the poll loop. All state transitions live in the pure reducer; this
// file only paints and forwards clicks.

import { ApiClient, ApiError } from "./api.js";
import { initialView, pollAndApply } from "./events.js";
import { renderFaceInto } from "./face.js";
import { createSmileyometer } from "./smileyometer.js";
import type { UiSessionView } from "./types.js";

const POLL_MS = 300;
const BACKOFF_MAX_MS = 5000;

type DriveMode = "puzzle" | "free";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, onClick: () => void, className = "btn"): HTMLButtonElement {
  const b = el("button", className, label);
  b.type = "button";
  b.addEventListener("click", onClick);
  return b;
}

class Panel {
  private view: UiSessionView = initialView();
  private client = new ApiClient();
  private driveMode: DriveMode = "puzzle";
  private programId: number | null = null;
  private countdownEndsAt = 0;
  private renderedClueSeq = 0;
  private renderedBeepCount = 0;
  private backoffMs = POLL_MS;
  private audio: AudioContext | null = null;

  private banner = el("div", "banner", "connecting…");
  private faceHost = el("div", "face-host");
  private poseLine = el("div", "pose-line", "pose: –");
  private modeToggle = button("mode: puzzle", () => this.toggleMode(), "btn btn-toggle");
  private editor = el("textarea", "editor");
  private runOutput = el("div", "run-output");
  private clueLine = el("div", "clue-line", "press Start to play");
  private countdownLine = el("div", "countdown-line");
  private listeningBadge = el("div", "listening-badge", "beep! I'm listening");
  private guessInput = el("input", "guess-input") as HTMLInputElement;
  private guessButton = button("Guess", () => void this.guess(), "btn btn-guess");
  private replayRow = el("div", "replay-row");
  private transcriptList = el("ul", "transcript");
  private toast = el("div", "toast");

  mount(root: HTMLElement): void {
    root.textContent = "";
    root.appendChild(this.banner);

    const grid = el("div", "grid");
    root.appendChild(grid);

    grid.appendChild(this.buildFaceCard());
    grid.appendChild(this.buildDriveCard());
    grid.appendChild(this.buildEditorCard());
    grid.appendChild(this.buildTabooCard());
    grid.appendChild(this.buildFeedbackCard());
    root.appendChild(this.toast);

    this.render();
    void this.pollLoop();
    setInterval(() => this.paintCountdown(), 200);
  }

  private buildFaceCard(): HTMLElement {
    const card = el("section", "card card-face");
    card.appendChild(el("h2", undefined, "Wolly"));
    card.appendChild(this.faceHost);
    card.appendChild(this.poseLine);
    return card;
  }

  private buildDriveCard(): HTMLElement {
    const card = el("section", "card card-drive");
    card.appendChild(el("h2", undefined, "Drive"));
    const pad = el("div", "drive-pad");
    pad.appendChild(button("⬆ forward", () => void this.drive("forward"), "btn btn-drive"));
    pad.appendChild(button("⬅ left", () => void this.drive("left"), "btn btn-drive"));
    pad.appendChild(button("right ➡", () => void this.drive("right"), "btn btn-drive"));
    card.appendChild(pad);
    card.appendChild(this.modeToggle);
    return card;
  }

  private buildEditorCard(): HTMLElement {
    const card = el("section", "card card-editor");
    card.appendChild(el("h2", undefined, "Program"));
    const keywords = el("div", "keyword-row");
    for (const word of ["MOVE", "LEFT", "RIGHT", "BEEP", 'SAY "hi"', "EMOTE happy", "REPEAT 2 { MOVE }"]) {
      keywords.appendChild(button(word, () => this.insertKeyword(word), "btn btn-kw"));
    }
    card.appendChild(keywords);
    this.editor.rows = 6;
    this.editor.placeholder = "MOVE MOVE RIGHT MOVE";
    card.appendChild(this.editor);
    const actions = el("div", "editor-actions");
    actions.appendChild(button("Run", () => void this.runProgram(), "btn btn-run"));
    actions.appendChild(button("Step", () => void this.stepProgram(), "btn btn-step"));
    card.appendChild(actions);
    card.appendChild(this.runOutput);
    return card;
  }

  private buildTabooCard(): HTMLElement {
    const card = el("section", "card card-taboo");
    card.appendChild(el("h2", undefined, "Guessing game"));
    card.appendChild(button("Start game", () => void this.startGame(), "btn btn-start"));
    card.appendChild(this.clueLine);
    card.appendChild(this.countdownLine);
    card.appendChild(this.listeningBadge);
    const row = el("div", "guess-row");
    this.guessInput.placeholder = "your guess";
    row.appendChild(this.guessInput);
    row.appendChild(this.guessButton);
    card.appendChild(row);
    this.replayRow.appendChild(el("span", undefined, "Play again? "));
    this.replayRow.appendChild(button("yes", () => void this.replay("yes"), "btn"));
    this.replayRow.appendChild(button("no", () => void this.replay("no"), "btn"));
    card.appendChild(this.replayRow);
    card.appendChild(this.transcriptList);
    return card;
  }

  private buildFeedbackCard(): HTMLElement {
    const card = el("section", "card card-feedback");
    card.appendChild(el("h2", undefined, "How was it?"));
    const meter = createSmileyometer((rating) => this.client.feedback(rating));
    const row = el("div", "smiley-row");
    for (const option of meter.options) {
      const b = button(option.glyph, () => {
        void meter.select(option.rating).then(() => {
          if (meter.state.error) this.showToast(meter.state.error);
          else this.showToast(`thanks! you said ${option.label}`);
        });
      }, "btn btn-smiley");
      b.title = option.label;
      b.setAttribute("aria-label", `${option.rating}: ${option.label}`);
      row.appendChild(b);
    }
    card.appendChild(row);
    return card;
  }

  private toggleMode(): void {
    this.driveMode = this.driveMode === "puzzle" ? "free" : "puzzle";
    this.modeToggle.textContent = `mode: ${this.driveMode}`;
  }

  private insertKeyword(word: string): void {
    const sep = this.editor.value && !this.editor.value.endsWith("\n") ? "\n" : "";
    this.editor.value += `${sep}${word}`;
    this.editor.focus();
  }

  private async drive(cmd: "forward" | "left" | "right"): Promise<void> {
    try {
      if (this.driveMode === "puzzle") {
        await this.client.move(cmd);
      } else if (cmd === "forward") {
        await this.client.drive(0.3, 0.3, 500);
      } else {
        const spin = cmd === "left" ? [-0.2, 0.2] : [0.2, -0.2];
        await this.client.drive(spin[0], spin[1], 400);
      }
    } catch (err) {
      this.showToast(err instanceof ApiError && err.code === "wall_collision" ? "bonk! a wall" : String(err));
    }
    await this.pollNow();
  }

  private async runProgram(): Promise<void> {
    try {
      this.programId = await this.client.postProgram(this.editor.value);
      const result = await this.client.runProgram(this.programId);
      this.runOutput.textContent = `${result.outcome} after ${result.steps} steps`;
    } catch (err) {
      this.runOutput.textContent = err instanceof ApiError ? err.message : String(err);
    }
    await this.pollNow();
  }

  private async stepProgram(): Promise<void> {
    try {
      if (this.programId === null) {
        this.programId = await this.client.postProgram(this.editor.value);
      }
      const result = await this.client.stepProgram(this.programId);
      this.runOutput.textContent = result.done ? "program finished" : "stepped";
    } catch (err) {
      this.runOutput.textContent = err instanceof ApiError ? err.message : String(err);
    }
    await this.pollNow();
  }

  private async startGame(): Promise<void> {
    try {
      await this.client.tabooStart(Math.floor(Math.random() * 1e6));
    } catch (err) {
      this.showToast(String(err));
    }
    await this.pollNow();
  }

  private async guess(): Promise<void> {
    const word = this.guessInput.value.trim();
    if (!word) return;
    try {
      await this.client.tabooGuess(word);
      this.guessInput.value = "";
    } catch (err) {
      if (err instanceof ApiError && err.code === "not_listening") {
        this.showToast("wait for the beep!");
      } else {
        this.showToast(String(err));
      }
    }
    await this.pollNow();
  }

  private async replay(answer: "yes" | "no"): Promise<void> {
    try {
      await this.client.tabooReplay(answer);
    } catch (err) {
      this.showToast(String(err));
    }
    await this.pollNow();
  }

  private async pollLoop(): Promise<void> {
    for (;;) {
      await this.pollNow();
      await new Promise((resolve) => setTimeout(resolve, this.backoffMs));
    }
  }

  private async pollNow(): Promise<void> {
    const next = await pollAndApply(this.view, this.client);
    this.backoffMs = next.connected ? POLL_MS : Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
    if (next !== this.view) {
      this.view = next;
      this.render();
    }
  }

  private render(): void {
    const v = this.view;
    this.banner.textContent = v.connected ? "connected" : "disconnected – retrying…";
    this.banner.className = v.connected ? "banner banner-ok" : "banner banner-down";

    renderFaceInto(this.faceHost, v.face);
    if (v.gridPose) {
      const p = v.pose ? ` (x=${v.pose.x.toFixed(2)}, y=${v.pose.y.toFixed(2)})` : "";
      this.poseLine.textContent =
        `cell (${v.gridPose.col}, ${v.gridPose.row}) facing ${v.gridPose.heading}${p}`;
    }

    this.clueLine.textContent =
      v.taboo.clueText !== null
        ? `Clue ${v.taboo.clueIndex}: ${v.taboo.clueText}`
        : v.taboo.phase === "idle"
          ? "press Start to play"
          : "…";
    this.listeningBadge.style.visibility = v.taboo.listening ? "visible" : "hidden";
    this.guessInput.disabled = !v.taboo.listening;
    this.guessButton.disabled = !v.taboo.listening;
    this.replayRow.style.visibility = v.taboo.phase === "ask_replay" ? "visible" : "hidden";

    if (v.taboo.clueSeq !== this.renderedClueSeq) {
      this.renderedClueSeq = v.taboo.clueSeq;
      this.countdownEndsAt = Date.now() + v.taboo.countdownMs;
    }
    if (v.beepCount > this.renderedBeepCount) {
      this.renderedBeepCount = v.beepCount;
      this.countdownEndsAt = 0;
      this.flashBeep();
    }
    this.paintCountdown();

    this.transcriptList.textContent = "";
    for (const line of v.transcript.slice(-8)) {
      this.transcriptList.appendChild(el("li", undefined, line.text));
    }
  }

  private paintCountdown(): void {
    if (this.view.taboo.phase !== "thinking" || this.countdownEndsAt === 0) {
      this.countdownLine.textContent = "";
      return;
    }
    const remaining = Math.max(0, this.countdownEndsAt - Date.now());
    this.countdownLine.textContent = `thinking… ${(remaining / 1000).toFixed(0)}s`;
  }

  private flashBeep(): void {
    document.body.classList.add("beep-flash");
    setTimeout(() => document.body.classList.remove("beep-flash"), 300);
    try {
      this.audio = this.audio ?? new AudioContext();
      const osc = this.audio.createOscillator();
      const gain = this.audio.createGain();
      osc.frequency.value = 880;
      gain.gain.value = 0.05;
      osc.connect(gain).connect(this.audio.destination);
      osc.start();
      osc.stop(this.audio.currentTime + 0.15);
    } catch {
      // no audio available; the flash already happened
    }
  }

  private showToast(message: string): void {
    this.toast.textContent = message;
    this.toast.classList.add("toast-visible");
    setTimeout(() => this.toast.classList.remove("toast-visible"), 2500);
  }
}

new Panel().mount(document.getElementById("app") as HTMLElement);
