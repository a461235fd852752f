// Minimal RIFF/WAVE decoder for waveform thumbnails (mono pcm16/float32).
// Avoids AudioContext so thumbnails work in tests and workers alike.

export interface DecodedWav {
  samples: Float32Array;
  sampleRate: number;
}

export function decodeWav(buffer: ArrayBuffer): DecodedWav {
  const view = new DataView(buffer);
  const tag = (offset: number) =>
    String.fromCharCode(
      view.getUint8(offset),
      view.getUint8(offset + 1),
      view.getUint8(offset + 2),
      view.getUint8(offset + 3),
    );
  if (buffer.byteLength < 12 || tag(0) !== "RIFF" || tag(8) !== "WAVE") {
    throw new Error("not a RIFF/WAVE file");
  }

  let fmt: { format: number; channels: number; rate: number; bits: number } | null = null;
  let data: { offset: number; size: number } | null = null;
  let pos = 12;
  while (pos + 8 <= buffer.byteLength) {
    const id = tag(pos);
    const size = view.getUint32(pos + 4, true);
    if (id === "fmt ") {
      fmt = {
        format: view.getUint16(pos + 8, true),
        channels: view.getUint16(pos + 10, true),
        rate: view.getUint32(pos + 12, true),
        bits: view.getUint16(pos + 22, true),
      };
    } else if (id === "data") {
      data = { offset: pos + 8, size };
    }
    pos += 8 + size + (size % 2);
  }
  if (!fmt || !data) throw new Error("missing fmt or data chunk");
  if (fmt.channels !== 1) throw new Error(`expected mono, got ${fmt.channels} channels`);

  if (fmt.format === 3 && fmt.bits === 32) {
    const n = data.size / 4;
    const samples = new Float32Array(n);
    for (let i = 0; i < n; i++) samples[i] = view.getFloat32(data.offset + i * 4, true);
    return { samples, sampleRate: fmt.rate };
  }
  if (fmt.format === 1 && fmt.bits === 16) {
    const n = data.size / 2;
    const samples = new Float32Array(n);
    for (let i = 0; i < n; i++) {
      samples[i] = view.getInt16(data.offset + i * 2, true) / 32767;
    }
    return { samples, sampleRate: fmt.rate };
  }
  throw new Error(`unsupported encoding (format=${fmt.format}, bits=${fmt.bits})`);
}
