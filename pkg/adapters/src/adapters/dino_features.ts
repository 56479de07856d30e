#!/usr/bin/env node
import { HttpFeatureEngine } from '../engines.js';
import { handleFeaturesJob } from '../handlers.js';
import { runAdapter } from '../runner.js';

process.exitCode = await runAdapter('features', (jobDir) =>
  handleFeaturesJob(jobDir, new HttpFeatureEngine()),
);
