// Event-log reducer. The server's append-only log is the single source of
// truth; the panel polls GET /events?since=lastSeq and folds new events
// into an immutable view. Applying the same events in one batch or many
// yields the same view, so polling cadence never changes what is drawn.

import { faceForEmotion } from "./face.js";
import type {
  Emotion,
  TabooView,
  TranscriptLine,
  UiSessionView,
  WireEvent,
  WireGridPose,
  WirePose,
} from "./types.js";

export const DEFAULT_THINK_WINDOW_MS = 20000;

export function initialView(thinkWindowMs: number = DEFAULT_THINK_WINDOW_MS): UiSessionView {
  return {
    lastSeq: 0,
    connected: true,
    pose: null,
    gridPose: null,
    face: faceForEmotion("neutral"),
    taboo: {
      phase: "idle",
      clueIndex: null,
      clueText: null,
      clueSeq: 0,
      thinkWindowMs,
      countdownMs: 0,
      listening: false,
      won: null,
      revealedWord: null,
    },
    transcript: [],
    beepCount: 0,
    feedbackCount: 0,
    editor: "",
  };
}

export function applyEvents(view: UiSessionView, events: readonly WireEvent[]): UiSessionView {
  return events.reduce(applyEvent, view);
}

export function applyEvent(view: UiSessionView, event: WireEvent): UiSessionView {
  const next = { ...view, lastSeq: event.seq };
  const taboo = (patch: Partial<TabooView>): TabooView => ({ ...view.taboo, ...patch });
  const say = (text: string): readonly TranscriptLine[] =>
    [...view.transcript, { seq: event.seq, kind: event.kind, text }];

  switch (event.kind) {
    case "pose_changed":
      next.pose = event.payload["pose"] as WirePose;
      next.gridPose = event.payload["grid_pose"] as WireGridPose;
      return next;

    case "program_step":
      next.gridPose = event.payload["grid_pose"] as WireGridPose;
      return next;

    case "beep":
      next.beepCount = view.beepCount + 1;
      if (view.taboo.phase === "thinking") {
        next.taboo = taboo({ phase: "listening", listening: true, countdownMs: 0 });
      }
      return next;

    case "rule_explanation":
      next.taboo = taboo({
        phase: "thinking",
        listening: false,
        clueIndex: null,
        clueText: null,
        won: null,
        revealedWord: null,
      });
      next.transcript = say(event.payload["text"] as string);
      return next;

    case "clue": {
      const index = event.payload["index"] as number;
      const text = event.payload["text"] as string;
      next.taboo = taboo({
        phase: "thinking",
        listening: false,
        clueIndex: index,
        clueText: text,
        clueSeq: event.seq,
        countdownMs: view.taboo.thinkWindowMs,
      });
      next.transcript = say(`Clue ${index}: ${text}`);
      return next;
    }

    case "speech": {
      const key = event.payload["key"] as string;
      const afterGuess = view.taboo.phase === "listening";
      next.taboo = taboo({
        phase: key === "play_again_question" ? "ask_replay" : afterGuess ? "responded" : view.taboo.phase,
        listening: false,
      });
      next.transcript = say(event.payload["text"] as string);
      return next;
    }

    case "emotion_changed":
      next.face = faceForEmotion(event.payload["emotion"] as Emotion);
      if (view.taboo.phase === "listening") {
        next.taboo = taboo({ phase: "responded", listening: false });
      }
      return next;

    case "game_over": {
      const word = event.payload["word"] as string;
      next.taboo = taboo({
        phase: "finished",
        listening: false,
        won: event.payload["won"] as boolean,
        revealedWord: word,
        countdownMs: 0,
      });
      next.transcript = say(`Game over: the word was "${word}"`);
      return next;
    }

    case "feedback_received":
      next.feedbackCount = view.feedbackCount + 1;
      return next;
  }
}

export interface EventsSource {
  eventsSince(since: number): Promise<WireEvent[]>;
}

// One poll step. On network failure the view is left untouched apart from
// the connected flag; the caller retries with backoff.
export async function pollAndApply(view: UiSessionView, source: EventsSource): Promise<UiSessionView> {
  let events: WireEvent[];
  try {
    events = await source.eventsSince(view.lastSeq);
  } catch {
    return view.connected ? { ...view, connected: false } : view;
  }
  const reconnected = view.connected ? view : { ...view, connected: true };
  return events.length === 0 ? reconnected : applyEvents(reconnected, events);
}
