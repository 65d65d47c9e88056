/** Fixture builders: tiny PPM and PNG images generated in-memory. */

import { deflateSync } from 'node:zlib'

export function ppmP6(width: number, height: number, fill: (x: number, y: number) => [number, number, number]): Buffer {
  const header = Buffer.from(`P6\n${width} ${height}\n255\n`, 'ascii')
  const body = Buffer.alloc(width * height * 3)
  for (let y = 0; y < height; y += 1) {
    for (let x = 0; x < width; x += 1) {
      const [r, g, b] = fill(x, y)
      const p = (y * width + x) * 3
      body[p] = r
      body[p + 1] = g
      body[p + 2] = b
    }
  }
  return Buffer.concat([header, body])
}

export function ppmP5(width: number, height: number, fill: (x: number, y: number) => number): Buffer {
  const header = Buffer.from(`P5\n${width} ${height}\n255\n`, 'ascii')
  const body = Buffer.alloc(width * height)
  for (let y = 0; y < height; y += 1) {
    for (let x = 0; x < width; x += 1) {
      body[y * width + x] = fill(x, y)
    }
  }
  return Buffer.concat([header, body])
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256)
  for (let n = 0; n < 256; n += 1) {
    let c = n
    for (let k = 0; k < 8; k += 1) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1
    }
    table[n] = c >>> 0
  }
  return table
})()

function crc32(data: Buffer): number {
  let crc = 0xffffffff
  for (const byte of data) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8)
  }
  return (crc ^ 0xffffffff) >>> 0
}

function chunk(type: string, body: Buffer): Buffer {
  const head = Buffer.alloc(4)
  head.writeUInt32BE(body.length)
  const typed = Buffer.concat([Buffer.from(type, 'ascii'), body])
  const crc = Buffer.alloc(4)
  crc.writeUInt32BE(crc32(typed))
  return Buffer.concat([head, typed, crc])
}

/**
 * Encode an RGB PNG. `filters[y]` picks the per-row filter (0..4); the
 * forward filtering here follows the format spec independently of the
 * decoder under test.
 */
export function pngRgb(
  width: number,
  height: number,
  fill: (x: number, y: number) => [number, number, number],
  filters?: number[],
): Buffer {
  const stride = width * 3
  const pixels = Buffer.alloc(stride * height)
  for (let y = 0; y < height; y += 1) {
    for (let x = 0; x < width; x += 1) {
      const [r, g, b] = fill(x, y)
      const p = y * stride + x * 3
      pixels[p] = r
      pixels[p + 1] = g
      pixels[p + 2] = b
    }
  }
  const raw = Buffer.alloc((stride + 1) * height)
  for (let y = 0; y < height; y += 1) {
    const filter = filters ? filters[y % filters.length] : 0
    raw[y * (stride + 1)] = filter
    for (let x = 0; x < stride; x += 1) {
      const cur = pixels[y * stride + x]
      const left = x >= 3 ? pixels[y * stride + x - 3] : 0
      const up = y > 0 ? pixels[(y - 1) * stride + x] : 0
      const upLeft = y > 0 && x >= 3 ? pixels[(y - 1) * stride + x - 3] : 0
      let encoded: number
      switch (filter) {
        case 0: encoded = cur; break
        case 1: encoded = cur - left; break
        case 2: encoded = cur - up; break
        case 3: encoded = cur - ((left + up) >> 1); break
        case 4: {
          const p = left + up - upLeft
          const pa = Math.abs(p - left)
          const pb = Math.abs(p - up)
          const pc = Math.abs(p - upLeft)
          const pred = pa <= pb && pa <= pc ? left : pb <= pc ? up : upLeft
          encoded = cur - pred
          break
        }
        default: throw new Error(`bad filter ${filter}`)
      }
      raw[y * (stride + 1) + 1 + x] = encoded & 0xff
    }
  }
  const ihdr = Buffer.alloc(13)
  ihdr.writeUInt32BE(width, 0)
  ihdr.writeUInt32BE(height, 4)
  ihdr[8] = 8 // bit depth
  ihdr[9] = 2 // RGB
  const signature = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a])
  return Buffer.concat([
    signature,
    chunk('IHDR', ihdr),
    chunk('IDAT', deflateSync(raw)),
    chunk('IEND', Buffer.alloc(0)),
  ])
}
