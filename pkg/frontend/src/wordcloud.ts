// Deterministic word-cloud layout: seeded spiral placement with rectangle
// collision, so the same term list always produces the same picture.

import type { TermEntry } from "./types";

export interface PlacedTerm extends TermEntry {
  x: number;
  y: number;
  fontSize: number;
}

interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function hashTerms(terms: TermEntry[]): number {
  let h = 2166136261;
  for (const t of terms) {
    for (let i = 0; i < t.term.length; i++) {
      h = Math.imul(h ^ t.term.charCodeAt(i), 16777619);
    }
    h = Math.imul(h ^ t.frequency, 16777619);
  }
  return h >>> 0;
}

function overlaps(a: Rect, b: Rect): boolean {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

export function measure(term: string, fontSize: number): [number, number] {
  // fixed-ratio estimate keeps layout identical across environments
  return [term.length * fontSize * 0.62, fontSize * 1.15];
}

export function layoutWordcloud(
  terms: TermEntry[],
  width = 680,
  height = 400,
  minFont = 11,
  maxFont = 36,
): PlacedTerm[] {
  if (terms.length === 0) return [];
  const rand = mulberry32(hashTerms(terms));
  const fMax = Math.max(...terms.map((t) => t.frequency));
  const fMin = Math.min(...terms.map((t) => t.frequency));
  const scale = (f: number): number => {
    if (fMax === fMin) return (minFont + maxFont) / 2;
    const t = Math.sqrt((f - fMin) / (fMax - fMin));
    return minFont + t * (maxFont - minFont);
  };
  const placed: PlacedTerm[] = [];
  const rects: Rect[] = [];
  const ordered = [...terms].sort(
    (a, b) => b.frequency - a.frequency || (a.term < b.term ? -1 : 1),
  );
  for (const term of ordered) {
    const fontSize = scale(term.frequency);
    const [w, h] = measure(term.term, fontSize);
    const angle0 = rand() * Math.PI * 2;
    let placedRect: Rect | null = null;
    for (let step = 0; step < 9000; step++) {
      const radius = 2.0 * Math.sqrt(step);
      const angle = angle0 + step * 0.37;
      // stretch horizontally and squash vertically to fill the wide canvas
      const cx = width / 2 + radius * Math.cos(angle) * 1.5;
      const cy = height / 2 + radius * Math.sin(angle) * 0.62;
      const rect: Rect = {
        x0: cx - w / 2,
        y0: cy - h / 2,
        x1: cx + w / 2,
        y1: cy + h / 2,
      };
      if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 > width || rect.y1 > height) {
        continue;
      }
      if (rects.every((r) => !overlaps(rect, r))) {
        placedRect = rect;
        break;
      }
    }
    if (!placedRect) continue; // no room left; smaller terms are dropped
    rects.push(placedRect);
    placed.push({
      ...term,
      x: (placedRect.x0 + placedRect.x1) / 2,
      y: (placedRect.y0 + placedRect.y1) / 2,
      fontSize,
    });
  }
  return placed;
}

export function wordcloudRects(placed: PlacedTerm[]): Rect[] {
  return placed.map((p) => {
    const [w, h] = measure(p.term, p.fontSize);
    return { x0: p.x - w / 2, y0: p.y - h / 2, x1: p.x + w / 2, y1: p.y + h / 2 };
  });
}

export function anyOverlap(placed: PlacedTerm[]): boolean {
  const rects = wordcloudRects(placed);
  for (let i = 0; i < rects.length; i++) {
    for (let j = i + 1; j < rects.length; j++) {
      if (overlaps(rects[i], rects[j])) return true;
    }
  }
  return false;
}
