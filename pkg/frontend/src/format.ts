/**
 * Writers for the embedding-dump formats the roby engine loads.
 *
 * Binary layout (little-endian throughout, reals as IEEE-754 binary64):
 *   magic   8 bytes ASCII "ROBYEMB1"
 *   version u16 = 1
 *   dims    u32
 *   classes u32
 *   count   u64
 *   records count x (label u32, dims x f64); record index = position
 *
 * CSV layout: header `index,label,e_0,...,e_{M-1}`, coordinates rendered
 * with 17 significant digits so parsing recovers the exact doubles.
 */

import { writeFileSync } from 'fs'

export const MAGIC = 'ROBYEMB1'
export const VERSION = 1
export const HEADER_BYTES = 26

export interface EmbeddingDump {
  dims: number
  numClasses: number
  labels: Int32Array | number[]
  vectors: Float64Array[] // one per record, each of length dims
}

export function coordinateText(value: number): string {
  // 17 significant decimal digits uniquely identify a binary64
  return value.toPrecision(17)
}

export function encodeBinary(dump: EmbeddingDump): Buffer {
  const { dims, numClasses, labels, vectors } = dump
  const recordBytes = 4 + 8 * dims
  const buffer = Buffer.alloc(HEADER_BYTES + recordBytes * vectors.length)
  buffer.write(MAGIC, 0, 'ascii')
  buffer.writeUInt16LE(VERSION, 8)
  buffer.writeUInt32LE(dims, 10)
  buffer.writeUInt32LE(numClasses, 14)
  buffer.writeBigUInt64LE(BigInt(vectors.length), 18)
  let offset = HEADER_BYTES
  for (let r = 0; r < vectors.length; r++) {
    buffer.writeUInt32LE(labels[r], offset)
    offset += 4
    const vec = vectors[r]
    for (let c = 0; c < dims; c++) {
      buffer.writeDoubleLE(vec[c], offset)
      offset += 8
    }
  }
  return buffer
}

export function encodeCsv(dump: EmbeddingDump): string {
  const header = ['index', 'label']
  for (let c = 0; c < dump.dims; c++) header.push(`e_${c}`)
  const lines = [header.join(',')]
  for (let r = 0; r < dump.vectors.length; r++) {
    const fields = [String(r), String(dump.labels[r])]
    const vec = dump.vectors[r]
    for (let c = 0; c < dump.dims; c++) fields.push(coordinateText(vec[c]))
    lines.push(fields.join(','))
  }
  return lines.join('\n') + '\n'
}

export function writeEmbeddings(
  dump: EmbeddingDump,
  outputPath: string,
  format: 'csv' | 'binary',
): void {
  if (format === 'binary') {
    writeFileSync(outputPath, encodeBinary(dump))
  } else {
    writeFileSync(outputPath, encodeCsv(dump), 'utf-8')
  }
}
