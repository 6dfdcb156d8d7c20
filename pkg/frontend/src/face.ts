// The robot's face: two eyes, a mouth, an LED-tinted backdrop. There is
// no nose, by design, and the mouth is always present. The render tree is
// plain data so tests can assert on exactly what would be drawn.

import type { Emotion, FaceView } from "./types.js";

interface FaceSpec {
  eyes: FaceView["eyes"];
  mouth: FaceView["mouth"];
  led: readonly [number, number, number];
}

// Must stay in lockstep with the server's face descriptor table.
const FACES: Record<Emotion, FaceSpec> = {
  very_happy: { eyes: "heart", mouth: "big_smile", led: [255, 64, 128] },
  happy: { eyes: "round", mouth: "smile", led: [0, 200, 0] },
  neutral: { eyes: "round", mouth: "flat", led: [255, 255, 255] },
  sad: { eyes: "droopy", mouth: "frown", led: [0, 64, 255] },
};

export function faceForEmotion(emotion: Emotion): FaceView {
  const spec = FACES[emotion];
  return { emotion, eyes: spec.eyes, mouth: spec.mouth, ledColor: spec.led };
}

// Closed set of drawable parts; a nose is not representable.
export type FaceRole = "backdrop" | "eye" | "mouth";

export interface FaceNode {
  role: FaceRole;
  shape: string;
  glyph: string;
  color?: string;
  children?: FaceNode[];
}

const EYE_GLYPHS: Record<FaceView["eyes"], string> = {
  round: "●",   // ●
  heart: "♥",   // ♥
  droopy: "⌒",  // ⌒
};

const MOUTH_GLYPHS: Record<FaceView["mouth"], string> = {
  smile: "◡",     // ◡
  big_smile: "⌣", // ⌣
  flat: "—",      // —
  frown: "⌢",     // ⌢
};

export function faceTree(face: FaceView): FaceNode {
  const [r, g, b] = face.ledColor;
  const eye: FaceNode = { role: "eye", shape: face.eyes, glyph: EYE_GLYPHS[face.eyes] };
  return {
    role: "backdrop",
    shape: face.emotion,
    glyph: "",
    color: `rgb(${r}, ${g}, ${b})`,
    children: [eye, { ...eye }, { role: "mouth", shape: face.mouth, glyph: MOUTH_GLYPHS[face.mouth] }],
  };
}

export function collectNodes(node: FaceNode): FaceNode[] {
  return [node, ...(node.children ?? []).flatMap(collectNodes)];
}

export function renderFaceInto(host: HTMLElement, face: FaceView): void {
  const tree = faceTree(face);
  host.textContent = "";
  host.appendChild(toElement(tree));
}

function toElement(node: FaceNode): HTMLElement {
  const el = document.createElement("div");
  el.className = `face-${node.role} face-${node.role}--${node.shape}`;
  el.dataset.role = node.role;
  el.dataset.shape = node.shape;
  if (node.color !== undefined) el.style.backgroundColor = node.color;
  if (node.glyph) el.textContent = node.glyph;
  for (const child of node.children ?? []) el.appendChild(toElement(child));
  return el;
}
