/**
 * Embedding backends. Both are deterministic and fully offline:
 *
 * - pixel-stats: pooled color statistics over a fixed grid plus global
 *   moments and gradient energy. Crude but a genuine image embedding, and
 *   exactly reproducible anywhere.
 * - char-ngram: hashed character trigrams of the caption text, L2-normalized.
 *
 * Model-based backbones (vision-encoder ensembles etc.) plug in behind the
 * same Extractor interface; they are deliberately not bundled here.
 */

import type { ManifestEntry } from './manifest.js'
import { readImage } from './image.js'

export interface Extractor {
  name: string
  dim: number
  embed(entry: ManifestEntry): Float32Array
}

const GRID = 4

export class PixelStatsExtractor implements Extractor {
  name = 'pixel-stats'
  dim = GRID * GRID * 3 + 9

  embed(entry: ManifestEntry): Float32Array {
    const { width, height, pixels } = readImage(entry.path)
    const out = new Float32Array(this.dim)
    // grid-pooled channel means, scaled to [0, 1]
    let idx = 0
    for (let gy = 0; gy < GRID; gy += 1) {
      for (let gx = 0; gx < GRID; gx += 1) {
        const x0 = Math.floor((gx * width) / GRID)
        const x1 = Math.max(x0 + 1, Math.floor(((gx + 1) * width) / GRID))
        const y0 = Math.floor((gy * height) / GRID)
        const y1 = Math.max(y0 + 1, Math.floor(((gy + 1) * height) / GRID))
        const sums = [0, 0, 0]
        let count = 0
        for (let y = y0; y < y1 && y < height; y += 1) {
          for (let x = x0; x < x1 && x < width; x += 1) {
            const p = (y * width + x) * 3
            sums[0] += pixels[p]
            sums[1] += pixels[p + 1]
            sums[2] += pixels[p + 2]
            count += 1
          }
        }
        for (let c = 0; c < 3; c += 1) {
          out[idx + c] = count ? sums[c] / (count * 255) : 0
        }
        idx += 3
      }
    }
    // global mean and standard deviation per channel
    const n = width * height
    const mean = [0, 0, 0]
    for (let i = 0; i < n; i += 1) {
      mean[0] += pixels[i * 3]
      mean[1] += pixels[i * 3 + 1]
      mean[2] += pixels[i * 3 + 2]
    }
    for (let c = 0; c < 3; c += 1) mean[c] /= n
    const varsum = [0, 0, 0]
    for (let i = 0; i < n; i += 1) {
      for (let c = 0; c < 3; c += 1) {
        const d = pixels[i * 3 + c] - mean[c]
        varsum[c] += d * d
      }
    }
    for (let c = 0; c < 3; c += 1) {
      out[idx + c] = mean[c] / 255
      out[idx + 3 + c] = Math.sqrt(varsum[c] / n) / 255
    }
    idx += 6
    // horizontal gradient energy per channel
    const grad = [0, 0, 0]
    let edges = 0
    for (let y = 0; y < height; y += 1) {
      for (let x = 1; x < width; x += 1) {
        const p = (y * width + x) * 3
        const q = (y * width + x - 1) * 3
        for (let c = 0; c < 3; c += 1) grad[c] += Math.abs(pixels[p + c] - pixels[q + c])
        edges += 1
      }
    }
    for (let c = 0; c < 3; c += 1) {
      out[idx + c] = edges ? grad[c] / (edges * 255) : 0
    }
    return out
  }
}

const NGRAM_DIM = 64

function fnv1a(text: string): number {
  let hash = 0x811c9dc5
  for (let i = 0; i < text.length; i += 1) {
    hash ^= text.charCodeAt(i)
    hash = Math.imul(hash, 0x01000193) >>> 0
  }
  return hash
}

export class CharNgramExtractor implements Extractor {
  name = 'char-ngram'
  dim = NGRAM_DIM

  embed(entry: ManifestEntry): Float32Array {
    const text = entry.caption
    if (text === undefined) {
      throw new Error(`record ${entry.record_id}: char-ngram backend needs a "caption" field`)
    }
    const out = new Float32Array(NGRAM_DIM)
    const padded = `##${text.toLowerCase()}##`
    for (let i = 0; i + 3 <= padded.length; i += 1) {
      out[fnv1a(padded.slice(i, i + 3)) % NGRAM_DIM] += 1
    }
    let norm = 0
    for (const v of out) norm += v * v
    norm = Math.sqrt(norm)
    if (norm > 0) {
      for (let i = 0; i < out.length; i += 1) out[i] /= norm
    } else {
      out[0] = 1 // empty caption still yields a valid non-zero row
    }
    return out
  }
}

export const BACKENDS: Record<string, () => Extractor> = {
  'pixel-stats': () => new PixelStatsExtractor(),
  'char-ngram': () => new CharNgramExtractor(),
}

export function getExtractor(name: string): Extractor {
  const factory = BACKENDS[name]
  if (!factory) {
    throw new Error(`unknown backend "${name}" (available: ${Object.keys(BACKENDS).join(', ')})`)
  }
  return factory()
}
