/**
 * End-to-end exporter checks: a small trained 10-class classifier's
 * embeddings must round-trip through the engine's validate/compute
 * commands. Requires the `roby` CLI on PATH.
 */

import * as tf from '@tensorflow/tfjs'
import { execFileSync } from 'child_process'
import { mkdtempSync, readFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { beforeAll, describe, expect, it } from 'vitest'
import { buildClassifier, makeBlobs, trainClassifier } from '../src/demo.js'
import { ExportError, exportEmbeddings } from '../src/exporter.js'
import { loadModel, saveModel } from '../src/model-io.js'

const DIMS = 12
const K = 10

let model: tf.LayersModel
let testInputs: number[][]
let workDir: string

function roby(...args: string[]): { code: number; stdout: string } {
  try {
    const stdout = execFileSync('roby', args, { encoding: 'utf-8' })
    return { code: 0, stdout }
  } catch (err: any) {
    return { code: err.status ?? 1, stdout: String(err.stdout ?? '') }
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), 'roby-export-'))
  const train = makeBlobs(K, 80, DIMS, 1)
  testInputs = makeBlobs(K, 20, DIMS, 2).inputs
  model = buildClassifier(DIMS, K)
  const acc = await trainClassifier(model, train)
  expect(acc).toBeGreaterThan(0.95) // blobs are trivially separable
}, 180_000)

describe('export -> engine round trip', () => {
  it('passes validate and compute with K=10 and no degeneracy warning', async () => {
    const out = join(workDir, 'embeddings.bin')
    const manifestPath = join(workDir, 'manifest.json')
    const manifest = await exportEmbeddings({
      model,
      inputs: testInputs,
      outputPath: out,
      format: 'binary',
      manifestPath,
      modelName: 'demo-mlp',
    })
    expect(manifest.num_classes).toBe(K)
    expect(manifest.dims).toBe(16) // read from the captured layer, never guessed
    expect(manifest.sample_count).toBe(testInputs.length)
    expect(manifest.layer_name).toBe('embedding')

    const written = JSON.parse(readFileSync(manifestPath, 'utf-8'))
    expect(written.num_classes).toBe(K)

    const validate = roby('validate', out)
    expect(validate.stdout).toContain('classes: 10')
    expect(validate.code).toBe(0)

    const reportPath = join(workDir, 'report.json')
    const compute = roby('compute', out, '--output', reportPath)
    expect(compute.code).toBe(0)
    const report = JSON.parse(readFileSync(reportPath, 'utf-8'))
    expect(report.num_classes).toBe(K)
    expect(report.warning).toBeNull()
    for (const field of ['fsa', 'fsd', 'roby']) {
      expect(report[field]).toBeGreaterThanOrEqual(0)
      expect(report[field]).toBeLessThanOrEqual(1)
    }
  }, 60_000)

  it('exports csv that the engine loads identically to binary', async () => {
    const csvOut = join(workDir, 'embeddings.csv')
    await exportEmbeddings({
      model,
      inputs: testInputs,
      outputPath: csvOut,
      format: 'csv',
    })
    expect(roby('validate', csvOut).code).toBe(0)
    const binReport = roby('compute', join(workDir, 'embeddings.bin'))
    const csvReport = roby('compute', csvOut)
    expect(csvReport.stdout).toBe(binReport.stdout)
  }, 60_000)

  it('labels equal the argmax of the final-layer scores', async () => {
    const sample = testInputs.slice(0, 32)
    const scores = model.predict(tf.tensor2d(sample)) as tf.Tensor
    const expected = Array.from(scores.argMax(-1).dataSync())
    const out = join(workDir, 'argmax.csv')
    await exportEmbeddings({
      model,
      inputs: sample,
      outputPath: out,
      format: 'csv',
    })
    const lines = readFileSync(out, 'utf-8').trimEnd().split('\n').slice(1)
    const written = lines.map(line => Number(line.split(',')[1]))
    expect(written).toEqual(expected)
  }, 60_000)

  it('repeated exports are byte-identical on the cpu backend', async () => {
    const a = join(workDir, 'rep-a.bin')
    const b = join(workDir, 'rep-b.bin')
    for (const out of [a, b]) {
      await exportEmbeddings({
        model,
        inputs: testInputs,
        outputPath: out,
        format: 'binary',
      })
    }
    expect(readFileSync(a).equals(readFileSync(b))).toBe(true)
  }, 60_000)
})

describe('model persistence', () => {
  it('save -> load preserves predictions and export output', async () => {
    const dir = join(workDir, 'saved-model')
    await saveModel(model, dir)
    const loaded = await loadModel(dir)
    const fromDisk = join(workDir, 'from-disk.bin')
    const fromMemory = join(workDir, 'from-memory.bin')
    await exportEmbeddings({
      model: loaded,
      inputs: testInputs,
      outputPath: fromDisk,
      format: 'binary',
    })
    await exportEmbeddings({
      model,
      inputs: testInputs,
      outputPath: fromMemory,
      format: 'binary',
    })
    expect(readFileSync(fromDisk).equals(readFileSync(fromMemory))).toBe(true)
  }, 60_000)
})

describe('error contracts', () => {
  it('LayerNotFound for a missing layer name', async () => {
    await expect(
      exportEmbeddings({
        model,
        inputs: testInputs.slice(0, 4),
        layer: 'no_such_layer',
        outputPath: join(workDir, 'x.bin'),
        format: 'binary',
      }),
    ).rejects.toThrowError(/LayerNotFound/)
  })

  it('EmptyInput for zero samples', async () => {
    await expect(
      exportEmbeddings({
        model,
        inputs: [],
        outputPath: join(workDir, 'x.bin'),
        format: 'binary',
      }),
    ).rejects.toThrowError(/EmptyInput/)
  })

  it('selecting a named layer changes the embedding width', async () => {
    const out = join(workDir, 'hidden.bin')
    const manifest = await exportEmbeddings({
      model,
      inputs: testInputs.slice(0, 8),
      layer: 'hidden_1',
      outputPath: out,
      format: 'binary',
    })
    expect(manifest.dims).toBe(32)
    expect(manifest.layer_name).toBe('hidden_1')
  }, 60_000)
})
