/**
 * CDRE writer: magic "CDRE" | u32 LE version=1 | u32 LE dim | u64 LE count,
 * then count*dim float32 LE values row-major, with a JSONL metadata sidecar
 * aligned by row index. Matches the engine's store format byte for byte.
 */

import type { ManifestEntry } from './manifest.js'
import { writeFileAtomic } from './atomic.js'

export const CDRE_MAGIC = 'CDRE'
export const CDRE_VERSION = 1
export const HEADER_SIZE = 20

export function encodePayload(dim: number, rows: Float32Array[]): Buffer {
  for (const row of rows) {
    if (row.length !== dim) {
      throw new Error(`row has ${row.length} values, expected ${dim}`)
    }
  }
  const buf = Buffer.alloc(HEADER_SIZE + rows.length * dim * 4)
  buf.write(CDRE_MAGIC, 0, 'ascii')
  buf.writeUInt32LE(CDRE_VERSION, 4)
  buf.writeUInt32LE(dim, 8)
  buf.writeBigUInt64LE(BigInt(rows.length), 12)
  let offset = HEADER_SIZE
  for (const row of rows) {
    for (const value of row) {
      buf.writeFloatLE(value, offset)
      offset += 4
    }
  }
  return buf
}

export function encodeSidecar(entries: ManifestEntry[]): string {
  const lines = entries.map((entry, row) => {
    const obj: Record<string, unknown> = {
      row,
      record_id: entry.record_id,
      prompt_id: entry.prompt_id,
      role: entry.role,
    }
    if (entry.group_id !== undefined) obj.group_id = entry.group_id
    if (entry.config_id !== undefined) obj.config_id = entry.config_id
    return JSON.stringify(obj, Object.keys(obj).sort())
  })
  return lines.length ? lines.join('\n') + '\n' : ''
}

export interface TablePaths {
  payload: string
  sidecar: string
}

export function tablePaths(prefix: string): TablePaths {
  const base = prefix.endsWith('.cdre') ? prefix.slice(0, -'.cdre'.length) : prefix
  return { payload: `${base}.cdre`, sidecar: `${base}.meta.jsonl` }
}

export function writeTable(
  prefix: string,
  dim: number,
  entries: ManifestEntry[],
  rows: Float32Array[],
): TablePaths {
  if (entries.length !== rows.length) {
    throw new Error(`${entries.length} manifest entries vs ${rows.length} embedding rows`)
  }
  const paths = tablePaths(prefix)
  writeFileAtomic(paths.payload, encodePayload(dim, rows))
  writeFileAtomic(paths.sidecar, encodeSidecar(entries))
  return paths
}
