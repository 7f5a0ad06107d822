import * as fs from 'node:fs';
import { bitsToFloats, isBitString } from './bits';

/** JSON header written by `qgolay dataset gen` on the first line of a dataset. */
export interface DatasetHeader {
  format: string;
  version: number;
  code: string;
  n: number;
  n_syndrome: number;
  n_label: number;
  p: number | null;
  p_grid: number[] | null;
  eta: number;
  seed: number;
  count: number;
  bit_order: string;
}

export interface Dataset {
  header: DatasetHeader;
  /** row-major [count, n_syndrome] */
  syndromes: Float32Array;
  /** row-major [count, n_label] */
  labels: Float32Array;
  count: number;
}

export function readHeader(path: string): DatasetHeader {
  const fd = fs.openSync(path, 'r');
  try {
    const buf = Buffer.alloc(64 * 1024);
    const n = fs.readSync(fd, buf, 0, buf.length, 0);
    const nl = buf.subarray(0, n).indexOf(0x0a);
    if (nl < 0) throw new Error(`${path}: missing header line`);
    const header = JSON.parse(buf.subarray(0, nl).toString('utf8')) as DatasetHeader;
    if (header.format !== 'qgolay-dataset') {
      throw new Error(`${path}: not a qgolay-dataset file`);
    }
    return header;
  } finally {
    fs.closeSync(fd);
  }
}

export function loadDataset(path: string, limit?: number): Dataset {
  const text = fs.readFileSync(path, 'utf8');
  let lineEnd = text.indexOf('\n');
  if (lineEnd < 0) throw new Error(`${path}: missing header line`);
  const header = JSON.parse(text.slice(0, lineEnd)) as DatasetHeader;
  if (header.format !== 'qgolay-dataset') {
    throw new Error(`${path}: not a qgolay-dataset file`);
  }
  const count = limit === undefined ? header.count : Math.min(limit, header.count);
  const syndromes = new Float32Array(count * header.n_syndrome);
  const labels = new Float32Array(count * header.n_label);
  let pos = lineEnd + 1;
  for (let i = 0; i < count; i++) {
    lineEnd = text.indexOf('\n', pos);
    const line = lineEnd < 0 ? text.slice(pos) : text.slice(pos, lineEnd);
    const lineno = i + 2;
    const sep = line.indexOf(' ');
    if (sep < 0) throw new Error(`${path}: line ${lineno}: expected two fields`);
    const syn = line.slice(0, sep);
    const label = line.slice(sep + 1);
    if (!isBitString(syn, header.n_syndrome)) {
      throw new Error(`${path}: line ${lineno}: bad syndrome field`);
    }
    if (!isBitString(label, header.n_label)) {
      throw new Error(`${path}: line ${lineno}: bad label field`);
    }
    bitsToFloats(syn, syndromes, i * header.n_syndrome);
    bitsToFloats(label, labels, i * header.n_label);
    pos = lineEnd + 1;
  }
  return { header, syndromes, labels, count };
}

/**
 * Read syndrome lines for prediction: either a raw file of bit lines or a
 * full dataset file (header skipped, first field of each record taken).
 */
export function loadSyndromeLines(path: string, width: number): string[] {
  const lines = fs.readFileSync(path, 'utf8').split('\n');
  const out: string[] = [];
  for (let i = 0; i < lines.length; i++) {
    let line = lines[i];
    if (line === '' && i === lines.length - 1) break;
    if (i === 0 && line.startsWith('{')) continue; // dataset header
    const sep = line.indexOf(' ');
    if (sep >= 0) line = line.slice(0, sep);
    if (!isBitString(line, width)) {
      throw new Error(`${path}: line ${i + 1}: expected ${width} bits`);
    }
    out.push(line);
  }
  return out;
}
