#!/usr/bin/env node
/**
 * cdre-adapter: export embeddings and verdicts in the evaluation engine's
 * formats.
 *
 *   cdre-adapter extract  --manifest images.jsonl --backend pixel-stats --out prefix
 *   cdre-adapter verdicts --in vqa_results.json --out verdicts.jsonl
 */

import { parseArgs } from 'node:util'
import { extractEmbeddings } from './extract.js'
import { exportVerdicts } from './verdicts.js'
import { BACKENDS } from './extractors.js'

function fail(message: string): never {
  console.error(`error: ${message}`)
  process.exit(2)
}

function main(argv: string[]): void {
  const command = argv[0]
  if (command === 'extract') {
    const { values } = parseArgs({
      args: argv.slice(1),
      options: {
        manifest: { type: 'string' },
        backend: { type: 'string', default: 'pixel-stats' },
        out: { type: 'string' },
      },
    })
    if (!values.manifest || !values.out) fail('extract needs --manifest and --out')
    const result = extractEmbeddings({
      manifestPath: values.manifest,
      backend: values.backend ?? 'pixel-stats',
      outPrefix: values.out,
    })
    console.log(`wrote ${result.paths.payload}: ${result.rows} rows, dim ${result.dim}`)
  } else if (command === 'verdicts') {
    const { values } = parseArgs({
      args: argv.slice(1),
      options: { in: { type: 'string' }, out: { type: 'string' } },
    })
    if (!values.in || !values.out) fail('verdicts needs --in and --out')
    const count = exportVerdicts(values.in, values.out)
    console.log(`wrote ${values.out}: ${count} verdicts`)
  } else {
    fail(`unknown command "${command ?? ''}" (use: extract | verdicts; backends: ${Object.keys(BACKENDS).join(', ')})`)
  }
}

try {
  main(process.argv.slice(2))
} catch (err) {
  console.error(`error: ${(err as Error).message}`)
  process.exit(2)
}
