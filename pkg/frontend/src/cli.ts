#!/usr/bin/env node
/**
 * Command-line exporter: model directory + JSON dataset in, embedding dump
 * + manifest out.
 *
 *   roby-export --model <dir> --data <samples.json> --output <file>
 *               [--layer penultimate|<name>] [--format csv|binary]
 *               [--batch-size N] [--manifest <file>] [--model-name <tag>]
 *
 * The dataset file holds either a JSON array of flat input vectors or an
 * object {"inputs": [...]}.
 */

import { readFileSync } from 'fs'
import { ExportError, exportEmbeddings } from './exporter.js'

interface CliArgs {
  model: string
  data: string
  output: string
  layer: string
  format: 'csv' | 'binary'
  batchSize: number
  manifest?: string
  modelName?: string
}

function parseArgs(argv: string[]): CliArgs {
  const args: Record<string, string> = {}
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i]
    const value = argv[i + 1]
    if (!flag.startsWith('--') || value === undefined) {
      throw new Error(`cannot parse arguments near '${flag}'`)
    }
    args[flag.slice(2)] = value
  }
  for (const required of ['model', 'data', 'output']) {
    if (!(required in args)) throw new Error(`--${required} is required`)
  }
  const format = (args['format'] ?? 'binary') as 'csv' | 'binary'
  if (format !== 'csv' && format !== 'binary') {
    throw new Error(`--format must be csv or binary, got '${format}'`)
  }
  return {
    model: args['model'],
    data: args['data'],
    output: args['output'],
    layer: args['layer'] ?? 'penultimate',
    format,
    batchSize: args['batch-size'] ? Number(args['batch-size']) : 128,
    manifest: args['manifest'],
    modelName: args['model-name'],
  }
}

export function readInputs(path: string): number[][] {
  const data = JSON.parse(readFileSync(path, 'utf-8'))
  const inputs = Array.isArray(data) ? data : data.inputs
  if (!Array.isArray(inputs)) {
    throw new Error(`${path}: expected a JSON array of vectors or {"inputs": [...]}`)
  }
  return inputs
}

async function main(): Promise<void> {
  const cli = parseArgs(process.argv.slice(2))
  const manifest = await exportEmbeddings({
    model: cli.model,
    inputs: readInputs(cli.data),
    layer: cli.layer,
    outputPath: cli.output,
    format: cli.format,
    manifestPath: cli.manifest,
    batchSize: cli.batchSize,
    modelName: cli.modelName,
  })
  console.log(
    `exported ${manifest.sample_count} records ` +
      `(K=${manifest.num_classes}, M=${manifest.dims}, layer=${manifest.layer_name}) ` +
      `to ${manifest.output}`,
  )
}

if (process.argv[1]?.endsWith('cli.js')) {
  main().catch(err => {
    const code = err instanceof ExportError ? 2 : 1
    console.error(String(err?.message ?? err))
    process.exit(code)
  })
}
