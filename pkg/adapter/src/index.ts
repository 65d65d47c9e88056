export { parseManifest, readManifest, ManifestError, type ManifestEntry, type Role } from './manifest.js'
export { encodePayload, encodeSidecar, tablePaths, writeTable, CDRE_MAGIC, CDRE_VERSION, HEADER_SIZE } from './cdre.js'
export { readImage, ImageFormatError, type RgbImage } from './image.js'
export { BACKENDS, getExtractor, PixelStatsExtractor, CharNgramExtractor, type Extractor } from './extractors.js'
export { parseVqaResults, exportVerdicts, VerdictError, type VqaResult } from './verdicts.js'
export { extractEmbeddings, type ExtractionJob, type ExtractionResult } from './extract.js'
