/** Provenance block echoed into every response (and printed by --manifest). */

export interface AdapterManifest {
  kind: string;
  model: string;
  checkpoint_hash: string;
  device: string;
  deterministic: boolean;
}

const DEFAULT_MODELS: Record<string, string> = {
  depth: 'depth-anything-v2',
  features: 'dinov2-vits14+featup',
  nvs: 'stable-zero123',
  perceptual: 'dreamsim',
  qagen: 'scene-graph-qa-llm',
  vqa: 'llava-next-7b',
  aesthetic: 'image-reward-v1',
  judge: 'pairwise-mllm-judge',
};

export function buildManifest(kind: string): AdapterManifest {
  const upper = kind.toUpperCase();
  return {
    kind,
    model: process.env[`EVAL3D_${upper}_MODEL`] ?? DEFAULT_MODELS[kind] ?? 'unknown',
    checkpoint_hash: process.env[`EVAL3D_${upper}_CHECKPOINT`] ?? 'unpinned',
    device: process.env.EVAL3D_ADAPTER_DEVICE ?? 'remote-endpoint',
    deterministic: (process.env.EVAL3D_ADAPTER_DETERMINISTIC ?? '1') !== '0',
  };
}
