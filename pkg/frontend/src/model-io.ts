/**
 * Minimal file-system save/load for tfjs layers models under plain
 * `@tensorflow/tfjs` (the node bindings ship a handler, the pure build
 * does not). A model directory holds `model.json` (topology + weights
 * manifest) and `weights.bin`.
 */

import * as tf from '@tensorflow/tfjs'
import { mkdirSync, readFileSync, writeFileSync } from 'fs'
import { join } from 'path'

export async function saveModel(model: tf.LayersModel, dir: string): Promise<void> {
  mkdirSync(dir, { recursive: true })
  await model.save(
    tf.io.withSaveHandler(async artifacts => {
      const weightData = artifacts.weightData as ArrayBuffer
      writeFileSync(join(dir, 'weights.bin'), Buffer.from(weightData))
      const manifest = {
        modelTopology: artifacts.modelTopology,
        weightsManifest: [
          { paths: ['weights.bin'], weights: artifacts.weightSpecs },
        ],
      }
      writeFileSync(join(dir, 'model.json'), JSON.stringify(manifest), 'utf-8')
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON',
        },
      }
    }),
  )
}

export async function loadModel(dir: string): Promise<tf.LayersModel> {
  const manifest = JSON.parse(readFileSync(join(dir, 'model.json'), 'utf-8'))
  const weightSpecs: tf.io.WeightsManifestEntry[] = []
  const buffers: Buffer[] = []
  for (const group of manifest.weightsManifest) {
    weightSpecs.push(...group.weights)
    for (const path of group.paths) {
      buffers.push(readFileSync(join(dir, path)))
    }
  }
  const joined = Buffer.concat(buffers)
  const weightData = joined.buffer.slice(
    joined.byteOffset,
    joined.byteOffset + joined.byteLength,
  )
  return tf.loadLayersModel(
    tf.io.fromMemory({
      modelTopology: manifest.modelTopology,
      weightSpecs,
      weightData,
    }),
  )
}
