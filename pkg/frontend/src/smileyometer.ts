// Smileyometer: exactly five faces, gloomy to delighted, mapping to
// ratings 1..5. The clicked rating is posted verbatim; on failure nothing
// is recorded locally and the widget shows an error instead.

export interface SmileyOption {
  rating: 1 | 2 | 3 | 4 | 5;
  glyph: string;
  label: string;
}

export const SMILEY_OPTIONS: readonly SmileyOption[] = [
  { rating: 1, glyph: "☹", label: "strongly disagree" },
  { rating: 2, glyph: "🙁", label: "disagree" },
  { rating: 3, glyph: "😐", label: "neutral" },
  { rating: 4, glyph: "🙂", label: "agree" },
  { rating: 5, glyph: "😃", label: "strongly agree" },
];

export interface SmileyometerState {
  submitted: number | null;
  pending: boolean;
  error: string | null;
}

export interface Smileyometer {
  readonly options: readonly SmileyOption[];
  readonly state: SmileyometerState;
  select(rating: number): Promise<void>;
}

export function createSmileyometer(post: (rating: number) => Promise<unknown>): Smileyometer {
  const state: SmileyometerState = { submitted: null, pending: false, error: null };
  return {
    options: SMILEY_OPTIONS,
    state,
    async select(rating: number): Promise<void> {
      if (!SMILEY_OPTIONS.some((option) => option.rating === rating)) {
        state.error = `no such smiley: ${rating}`;
        return;
      }
      state.pending = true;
      try {
        await post(rating);
        state.submitted = rating;
        state.error = null;
      } catch (err) {
        state.error = err instanceof Error ? err.message : String(err);
      } finally {
        state.pending = false;
      }
    },
  };
}
