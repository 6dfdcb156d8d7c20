// Wire shapes mirror the server's JSON exactly; view shapes are what the
// panel renders. The view is a pure function of the event log prefix plus
// local editor state, so everything here is plain data.

export type EventKind =
  | "rule_explanation"
  | "clue"
  | "beep"
  | "speech"
  | "emotion_changed"
  | "pose_changed"
  | "program_step"
  | "game_over"
  | "feedback_received";

export interface WireEvent {
  seq: number;
  ts: number;
  kind: EventKind;
  payload: Record<string, unknown>;
}

export interface WirePose {
  x: number;
  y: number;
  theta: number;
}

export type Heading = "east" | "north" | "west" | "south";

export interface WireGridPose {
  col: number;
  row: number;
  heading: Heading;
}

export type Emotion = "very_happy" | "happy" | "neutral" | "sad";
export type EyeShape = "round" | "heart" | "droopy";
export type MouthShape = "smile" | "big_smile" | "flat" | "frown";

export interface FaceView {
  emotion: Emotion;
  eyes: EyeShape;
  mouth: MouthShape;
  ledColor: readonly [number, number, number];
}

export type TabooPhase =
  | "idle"       // no game started
  | "thinking"   // clue spoken, robot thinking, guesses rejected
  | "listening"  // beep heard, guess input open
  | "responded"  // guess answered, next clue or replay question pending
  | "ask_replay" // robot asked to play again
  | "finished";  // game over

export interface TabooView {
  phase: TabooPhase;
  clueIndex: number | null;
  clueText: string | null;
  clueSeq: number;       // seq of the latest clue event, restarts the countdown
  thinkWindowMs: number;
  countdownMs: number;   // think window remaining right after the latest event
  listening: boolean;    // true only between a beep and the next guess response
  won: boolean | null;
  revealedWord: string | null;
}

export interface TranscriptLine {
  seq: number;
  kind: EventKind;
  text: string;
}

export interface UiSessionView {
  lastSeq: number;
  connected: boolean;
  pose: WirePose | null;
  gridPose: WireGridPose | null;
  face: FaceView;
  taboo: TabooView;
  transcript: readonly TranscriptLine[];
  beepCount: number;
  feedbackCount: number;
  editor: string;
}
