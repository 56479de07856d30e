import type { Pose } from './protocol.js';

export interface RelativePose {
  dAzimuth: number; // degrees, wrapped to (-180, 180]
  dElevation: number; // degrees
  dRadius: number; // world units
}

/** NVS models consume the camera delta, not absolute rig poses. */
export function relativePose(source: Pose, target: Pose): RelativePose {
  let dAzimuth = (target.azimuth - source.azimuth) % 360;
  if (dAzimuth <= -180) dAzimuth += 360;
  if (dAzimuth > 180) dAzimuth -= 360;
  return {
    dAzimuth,
    dElevation: target.elevation - source.elevation,
    dRadius: target.distance - source.distance,
  };
}
