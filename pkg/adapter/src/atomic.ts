/** Atomic file writes: temp file in the target directory, then rename. */

import { mkdirSync, renameSync, writeFileSync } from 'node:fs'
import { dirname, join, basename } from 'node:path'

export function writeFileAtomic(path: string, data: Buffer | string): void {
  const dir = dirname(path)
  mkdirSync(dir, { recursive: true })
  const tmp = join(dir, `.${basename(path)}.${process.pid}.tmp`)
  writeFileSync(tmp, data)
  renameSync(tmp, path)
}
