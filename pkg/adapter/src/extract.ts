/**
 * Extraction job: run a backend over every manifest entry and write the
 * CDRE pair. The whole job aborts before any output if the manifest is
 * malformed, and aborts listing the offending path if an image is
 * unreadable; partial tables are never written.
 */

import { readManifest } from './manifest.js'
import { getExtractor } from './extractors.js'
import { writeTable, type TablePaths } from './cdre.js'

export interface ExtractionJob {
  manifestPath: string
  backend: string
  outPrefix: string
}

export interface ExtractionResult {
  rows: number
  dim: number
  paths: TablePaths
}

export function extractEmbeddings(job: ExtractionJob): ExtractionResult {
  const entries = readManifest(job.manifestPath)
  const extractor = getExtractor(job.backend)
  const rows: Float32Array[] = []
  for (const entry of entries) {
    rows.push(extractor.embed(entry))
  }
  const paths = writeTable(job.outPrefix, extractor.dim, entries, rows)
  return { rows: rows.length, dim: extractor.dim, paths }
}
