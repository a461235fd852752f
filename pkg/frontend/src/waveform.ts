// Peak-decimation waveform thumbnails: one max-abs peak per pixel bin.

export function computePeaks(samples: Float32Array, bins: number): number[] {
  if (bins <= 0) return [];
  const peaks = new Array<number>(bins).fill(0);
  if (samples.length === 0) return peaks;
  const perBin = samples.length / bins;
  for (let b = 0; b < bins; b++) {
    const start = Math.floor(b * perBin);
    const end = Math.min(Math.max(Math.ceil((b + 1) * perBin), start + 1), samples.length);
    let max = 0;
    for (let i = start; i < end; i++) {
      const v = Math.abs(samples[i]);
      if (v > max) max = v;
    }
    peaks[b] = max;
  }
  return peaks;
}

// SVG path for a symmetric waveform strip of the given pixel size.
export function peaksToPath(peaks: number[], width: number, height: number): string {
  if (peaks.length === 0) return "";
  const mid = height / 2;
  const step = width / peaks.length;
  const parts: string[] = [];
  for (let i = 0; i < peaks.length; i++) {
    const x = (i * step).toFixed(2);
    const h = Math.max(peaks[i] * mid, 0.5);
    parts.push(`M${x} ${(mid - h).toFixed(2)}L${x} ${(mid + h).toFixed(2)}`);
  }
  return parts.join("");
}
