/**
 * Minimal image readers for the offline extractor backends.
 *
 * PPM: binary P6 (RGB) and P5 (grayscale), 8-bit maxval.
 * PNG: 8-bit depth, color types 0/2/4/6, non-interlaced. Everything else
 * aborts with a clear message; the adapter never guesses pixel data.
 */

import { readFileSync } from 'node:fs'
import { inflateSync } from 'node:zlib'

export interface RgbImage {
  width: number
  height: number
  /** Row-major RGB triples, 0..255. */
  pixels: Uint8Array
}

export class ImageFormatError extends Error {}

export function readImage(path: string): RgbImage {
  let data: Buffer
  try {
    data = readFileSync(path)
  } catch (err) {
    throw new ImageFormatError(`unreadable image ${path}: ${(err as Error).message}`)
  }
  try {
    if (data.length >= 2 && data[0] === 0x50 && (data[1] === 0x35 || data[1] === 0x36)) {
      return decodePpm(data)
    }
    if (data.length >= 8 && data.readUInt32BE(0) === 0x89504e47) {
      return decodePng(data)
    }
  } catch (err) {
    if (err instanceof ImageFormatError) {
      throw new ImageFormatError(`${path}: ${err.message}`)
    }
    throw err
  }
  throw new ImageFormatError(`${path}: not a P5/P6 PPM or PNG file`)
}

function decodePpm(data: Buffer): RgbImage {
  const gray = data[1] === 0x35
  let pos = 2
  const fields: number[] = []
  while (fields.length < 3) {
    while (pos < data.length && isSpace(data[pos])) pos += 1
    if (data[pos] === 0x23) {
      while (pos < data.length && data[pos] !== 0x0a) pos += 1
      continue
    }
    let start = pos
    while (pos < data.length && !isSpace(data[pos])) pos += 1
    const token = data.toString('ascii', start, pos)
    const value = Number(token)
    if (!Number.isInteger(value) || value <= 0) {
      throw new ImageFormatError(`bad header token "${token}"`)
    }
    fields.push(value)
  }
  pos += 1 // single whitespace after maxval
  const [width, height, maxval] = fields
  if (maxval !== 255) {
    throw new ImageFormatError(`only maxval 255 supported, got ${maxval}`)
  }
  const channels = gray ? 1 : 3
  const expected = width * height * channels
  if (data.length - pos < expected) {
    throw new ImageFormatError(`truncated pixel data: ${data.length - pos} < ${expected}`)
  }
  const raw = data.subarray(pos, pos + expected)
  const pixels = new Uint8Array(width * height * 3)
  for (let i = 0; i < width * height; i += 1) {
    if (gray) {
      pixels[i * 3] = pixels[i * 3 + 1] = pixels[i * 3 + 2] = raw[i]
    } else {
      pixels[i * 3] = raw[i * 3]
      pixels[i * 3 + 1] = raw[i * 3 + 1]
      pixels[i * 3 + 2] = raw[i * 3 + 2]
    }
  }
  return { width, height, pixels }
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d
}

const PNG_CHANNELS: Record<number, number> = { 0: 1, 2: 3, 4: 2, 6: 4 }

function decodePng(data: Buffer): RgbImage {
  if (data.readUInt32BE(4) !== 0x0d0a1a0a) {
    throw new ImageFormatError('bad PNG signature')
  }
  let pos = 8
  let width = 0
  let height = 0
  let colorType = -1
  const idat: Buffer[] = []
  while (pos + 8 <= data.length) {
    const length = data.readUInt32BE(pos)
    const type = data.toString('ascii', pos + 4, pos + 8)
    const body = data.subarray(pos + 8, pos + 8 + length)
    pos += 12 + length // length + type + data + crc
    if (type === 'IHDR') {
      width = body.readUInt32BE(0)
      height = body.readUInt32BE(4)
      const bitDepth = body[8]
      colorType = body[9]
      if (bitDepth !== 8) throw new ImageFormatError(`only 8-bit PNG supported, got ${bitDepth}`)
      if (!(colorType in PNG_CHANNELS)) {
        throw new ImageFormatError(`unsupported PNG color type ${colorType}`)
      }
      if (body[12] !== 0) throw new ImageFormatError('interlaced PNG not supported')
    } else if (type === 'IDAT') {
      idat.push(body)
    } else if (type === 'IEND') {
      break
    }
  }
  if (!width || !height || colorType < 0 || idat.length === 0) {
    throw new ImageFormatError('missing IHDR or IDAT')
  }
  const channels = PNG_CHANNELS[colorType]
  const stride = width * channels
  const raw = inflateSync(Buffer.concat(idat))
  if (raw.length !== (stride + 1) * height) {
    throw new ImageFormatError(`decompressed size ${raw.length} != ${(stride + 1) * height}`)
  }
  const recon = new Uint8Array(stride * height)
  for (let y = 0; y < height; y += 1) {
    const filter = raw[y * (stride + 1)]
    const rowIn = raw.subarray(y * (stride + 1) + 1, (y + 1) * (stride + 1))
    const rowOut = recon.subarray(y * stride, (y + 1) * stride)
    const prev = y > 0 ? recon.subarray((y - 1) * stride, y * stride) : null
    unfilterRow(filter, rowIn, rowOut, prev, channels)
  }
  const pixels = new Uint8Array(width * height * 3)
  for (let i = 0; i < width * height; i += 1) {
    const src = i * channels
    if (channels === 1 || channels === 2) {
      pixels[i * 3] = pixels[i * 3 + 1] = pixels[i * 3 + 2] = recon[src]
    } else {
      pixels[i * 3] = recon[src]
      pixels[i * 3 + 1] = recon[src + 1]
      pixels[i * 3 + 2] = recon[src + 2]
    }
  }
  return { width, height, pixels }
}

function unfilterRow(
  filter: number,
  rowIn: Uint8Array | Buffer,
  rowOut: Uint8Array,
  prev: Uint8Array | null,
  bpp: number,
): void {
  const n = rowIn.length
  for (let x = 0; x < n; x += 1) {
    const rawByte = rowIn[x]
    const left = x >= bpp ? rowOut[x - bpp] : 0
    const up = prev ? prev[x] : 0
    const upLeft = prev && x >= bpp ? prev[x - bpp] : 0
    let value: number
    switch (filter) {
      case 0:
        value = rawByte
        break
      case 1:
        value = rawByte + left
        break
      case 2:
        value = rawByte + up
        break
      case 3:
        value = rawByte + ((left + up) >> 1)
        break
      case 4:
        value = rawByte + paeth(left, up, upLeft)
        break
      default:
        throw new ImageFormatError(`unknown PNG filter ${filter}`)
    }
    rowOut[x] = value & 0xff
  }
}

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c
  const pa = Math.abs(p - a)
  const pb = Math.abs(p - b)
  const pc = Math.abs(p - c)
  if (pa <= pb && pa <= pc) return a
  if (pb <= pc) return b
  return c
}
