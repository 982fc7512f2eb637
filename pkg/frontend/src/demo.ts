/**
 * Builds and trains a small 10-class MLP on well-separated synthetic blobs,
 * saves it, and exports its test-set embeddings. Gives the exporter (and
 * its tests) a real trained classifier without any external downloads.
 */

import * as tf from '@tensorflow/tfjs'
import { exportEmbeddings } from './exporter.js'
import { saveModel } from './model-io.js'

export interface BlobData {
  inputs: number[][]
  classes: number[]
}

/** Deterministic blob inputs: class k centered at 4 * e_{k mod dims}. */
export function makeBlobs(
  numClasses: number,
  perClass: number,
  dims: number,
  seed: number,
): BlobData {
  let state = BigInt(seed) + 0x9e3779b97f4a7c15n
  const next = () => {
    // splitmix64, mapped to [0, 1)
    state = (state + 0x9e3779b97f4a7c15n) & 0xffffffffffffffffn
    let z = state
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & 0xffffffffffffffffn
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & 0xffffffffffffffffn
    z = z ^ (z >> 31n)
    return Number(z >> 11n) / 2 ** 53
  }
  const gauss = () => {
    const u = Math.max(next(), Number.MIN_VALUE)
    const v = next()
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v)
  }
  const inputs: number[][] = []
  const classes: number[] = []
  for (let k = 0; k < numClasses; k++) {
    for (let i = 0; i < perClass; i++) {
      const x = new Array(dims).fill(0).map(() => gauss() * 0.5)
      x[k % dims] += 4.0
      if (k >= dims) x[(k + 1) % dims] += 4.0
      inputs.push(x)
      classes.push(k)
    }
  }
  return { inputs, classes }
}

export function buildClassifier(dims: number, numClasses: number): tf.LayersModel {
  const model = tf.sequential()
  model.add(
    tf.layers.dense({ units: 32, activation: 'relu', inputShape: [dims], name: 'hidden_1' }),
  )
  model.add(tf.layers.dense({ units: 16, activation: 'relu', name: 'embedding' }))
  model.add(tf.layers.dense({ units: numClasses, activation: 'softmax', name: 'scores' }))
  model.compile({
    optimizer: tf.train.adam(0.01),
    loss: 'sparseCategoricalCrossentropy',
    metrics: ['accuracy'],
  })
  return model
}

export async function trainClassifier(
  model: tf.LayersModel,
  data: BlobData,
  epochs = 25,
): Promise<number> {
  const x = tf.tensor2d(data.inputs)
  // sparseCategoricalCrossentropy wants float labels (it floors internally)
  const y = tf.tensor1d(data.classes, 'float32')
  const history = await model.fit(x, y, { epochs, batchSize: 64, verbose: 0 })
  x.dispose()
  y.dispose()
  const acc = history.history['acc'] ?? history.history['accuracy']
  return Number(acc[acc.length - 1])
}

export async function main(outDir = 'demo-out'): Promise<void> {
  const dims = 12
  const numClasses = 10
  const train = makeBlobs(numClasses, 80, dims, 1)
  const test = makeBlobs(numClasses, 20, dims, 2)

  const model = buildClassifier(dims, numClasses)
  const acc = await trainClassifier(model, train)
  console.log(`trained 10-class demo classifier, train accuracy ${acc.toFixed(3)}`)

  await saveModel(model, `${outDir}/model`)
  const manifest = await exportEmbeddings({
    model,
    inputs: test.inputs,
    outputPath: `${outDir}/embeddings.bin`,
    format: 'binary',
    manifestPath: `${outDir}/manifest.json`,
    modelName: 'demo-mlp',
  })
  console.log('export manifest:', manifest)
  console.log(`validate with: roby validate ${outDir}/embeddings.bin`)
}

if (process.argv[1]?.endsWith('demo.js')) {
  main().catch(err => {
    console.error(err)
    process.exit(1)
  })
}
