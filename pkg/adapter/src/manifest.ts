/**
 * Images manifest: one JSONL object per image with the ids the engine needs.
 * Uniqueness and role/config rules mirror the engine's table invariants, so
 * a manifest that loads here produces a table that validates there.
 */

import { readFileSync } from 'node:fs'

export type Role = 'real' | 'generated'

export interface ManifestEntry {
  path: string
  record_id: string
  prompt_id: string
  role: Role
  group_id?: string
  config_id?: string
  caption?: string
}

export class ManifestError extends Error {}

function asEntry(obj: unknown, line: number): ManifestEntry {
  if (typeof obj !== 'object' || obj === null || Array.isArray(obj)) {
    throw new ManifestError(`line ${line}: expected a JSON object`)
  }
  const rec = obj as Record<string, unknown>
  for (const key of ['path', 'record_id', 'prompt_id', 'role']) {
    if (typeof rec[key] !== 'string' || rec[key] === '') {
      throw new ManifestError(`line ${line}: missing or empty "${key}"`)
    }
  }
  const role = rec.role as string
  if (role !== 'real' && role !== 'generated') {
    throw new ManifestError(`line ${line}: role must be "real" or "generated", got "${role}"`)
  }
  for (const key of ['group_id', 'config_id', 'caption']) {
    if (rec[key] !== undefined && typeof rec[key] !== 'string') {
      throw new ManifestError(`line ${line}: "${key}" must be a string when present`)
    }
  }
  if (role === 'generated' && !rec.config_id) {
    throw new ManifestError(`line ${line}: generated rows need a config_id`)
  }
  if (role === 'real' && rec.config_id) {
    throw new ManifestError(`line ${line}: real rows must not carry a config_id`)
  }
  return {
    path: rec.path as string,
    record_id: rec.record_id as string,
    prompt_id: rec.prompt_id as string,
    role,
    group_id: rec.group_id as string | undefined,
    config_id: rec.config_id as string | undefined,
    caption: rec.caption as string | undefined,
  }
}

export function parseManifest(text: string): ManifestEntry[] {
  const entries: ManifestEntry[] = []
  const seen = new Set<string>()
  let line = 0
  for (const raw of text.split('\n')) {
    line += 1
    if (!raw.trim()) continue
    let obj: unknown
    try {
      obj = JSON.parse(raw)
    } catch (err) {
      throw new ManifestError(`line ${line}: ${(err as Error).message}`)
    }
    const entry = asEntry(obj, line)
    if (seen.has(entry.record_id)) {
      throw new ManifestError(`line ${line}: duplicate record_id "${entry.record_id}"`)
    }
    seen.add(entry.record_id)
    entries.push(entry)
  }
  return entries
}

export function readManifest(path: string): ManifestEntry[] {
  return parseManifest(readFileSync(path, 'utf-8'))
}
