/**
 * Runs a dataset through a trained classifier, captures a chosen layer's
 * activations as the embedding f(x) and the argmax of the final layer as
 * the predicted label, and writes the neutral embedding-dump formats plus
 * a JSON manifest.
 */

import * as tf from '@tensorflow/tfjs'
import { writeFileSync } from 'fs'
import { EmbeddingDump, writeEmbeddings } from './format.js'
import { loadModel } from './model-io.js'

export class ExportError extends Error {
  constructor(
    public readonly kind: 'LayerNotFound' | 'ShapeMismatch' | 'EmptyInput',
    message: string,
  ) {
    super(`${kind}: ${message}`)
  }
}

export interface ExportJob {
  /** A loaded model or a model directory (model.json + weights.bin). */
  model: tf.LayersModel | string
  /** Sample inputs, one flat vector per sample. */
  inputs: number[][]
  /** Named layer to capture, or 'penultimate' (default). */
  layer?: string
  outputPath: string
  format: 'csv' | 'binary'
  manifestPath?: string
  batchSize?: number
  modelName?: string
}

export interface ExportManifest {
  model_name: string
  layer_name: string
  dims: number
  num_classes: number
  sample_count: number
  format: 'csv' | 'binary'
  output: string
  determinism: string
}

function selectLayer(model: tf.LayersModel, selector: string): tf.layers.Layer {
  if (selector === 'penultimate') {
    if (model.layers.length < 2) {
      throw new ExportError(
        'LayerNotFound',
        `model has ${model.layers.length} layer(s); no penultimate layer exists`,
      )
    }
    return model.layers[model.layers.length - 2]
  }
  try {
    return model.getLayer(selector)
  } catch {
    const names = model.layers.map(l => l.name).join(', ')
    throw new ExportError(
      'LayerNotFound',
      `no layer named '${selector}' (layers: ${names})`,
    )
  }
}

function outputWidth(model: tf.LayersModel): number {
  const shape = model.outputs[0].shape
  const width = shape[shape.length - 1]
  if (typeof width !== 'number' || width < 2) {
    throw new ExportError(
      'ShapeMismatch',
      `final layer must output one score per class, got shape [${shape}]`,
    )
  }
  return width
}

export async function exportEmbeddings(job: ExportJob): Promise<ExportManifest> {
  if (job.inputs.length === 0) {
    throw new ExportError('EmptyInput', 'no samples to export')
  }
  const model =
    typeof job.model === 'string' ? await loadModel(job.model) : job.model
  const layer = selectLayer(model, job.layer ?? 'penultimate')
  const numClasses = outputWidth(model)
  const embedModel = tf.model({ inputs: model.inputs, outputs: layer.output as tf.SymbolicTensor })

  const batchSize = job.batchSize ?? 128
  const labels: number[] = []
  const vectors: Float64Array[] = []
  let dims = -1

  for (let start = 0; start < job.inputs.length; start += batchSize) {
    const batch = job.inputs.slice(start, start + batchSize)
    const result = tf.tidy(() => {
      const x = tf.tensor2d(batch)
      const scores = model.predict(x) as tf.Tensor
      const predicted = scores.argMax(-1)
      const activations = embedModel.predict(x) as tf.Tensor
      if (activations.shape[0] !== batch.length) {
        throw new ExportError(
          'ShapeMismatch',
          `layer '${layer.name}' is not per-sample: batch ${batch.length} ` +
            `gave shape [${activations.shape}]`,
        )
      }
      const flatDims = activations.size / batch.length
      const flattened = activations.reshape([batch.length, flatDims])
      return {
        labels: predicted.dataSync(),
        embeddings: flattened.dataSync(),
        flatDims,
      }
    })
    if (dims === -1) dims = result.flatDims
    for (let r = 0; r < batch.length; r++) {
      labels.push(result.labels[r])
      vectors.push(
        Float64Array.from(
          result.embeddings.subarray(r * dims, (r + 1) * dims),
        ),
      )
    }
  }

  const dump: EmbeddingDump = {
    dims,
    numClasses,
    labels: Int32Array.from(labels),
    vectors,
  }
  writeEmbeddings(dump, job.outputPath, job.format)

  const manifest: ExportManifest = {
    model_name: job.modelName ?? model.name,
    layer_name: layer.name,
    dims,
    num_classes: numClasses,
    sample_count: vectors.length,
    format: job.format,
    output: job.outputPath,
    determinism:
      'repeat exports of the same model and data are identical under the ' +
      'deterministic tfjs CPU backend; other backends may differ in the ' +
      'last float ulps',
  }
  if (job.manifestPath) {
    writeFileSync(job.manifestPath, JSON.stringify(manifest, null, 2), 'utf-8')
  }
  return manifest
}
