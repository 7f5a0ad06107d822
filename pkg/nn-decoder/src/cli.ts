import * as fs from 'node:fs';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { initBackend } from './backend';
import { loadCheckpoint, saveCheckpoint } from './checkpoint';
import { loadDataset } from './dataset';
import { makeConfig } from './model';
import { predictFile } from './predict';
import { serveStdio, serveTcp } from './serve';
import { train } from './train';
import { runExperiment } from './experiment';

async function cmdTrain(argv: any): Promise<number> {
  await initBackend(argv.backend);
  const dataset = loadDataset(argv.dataset, argv.limit);
  const config = makeConfig(dataset.header.n_syndrome, dataset.header.n_label, {
    ...(argv.batchSize !== undefined && { batchSize: argv.batchSize }),
    ...(argv.epochs !== undefined && { epochs: argv.epochs }),
    ...(argv.learningRate !== undefined && { learningRate: argv.learningRate }),
    ...(argv.embedDim !== undefined && { embedDim: argv.embedDim }),
    ...(argv.heads !== undefined && { heads: argv.heads }),
    ...(argv.layers !== undefined && { encoderLayers: argv.layers }),
    ...(argv.valSplit !== undefined && { validationSplit: argv.valSplit }),
    ...(argv.seed !== undefined && { seed: argv.seed }),
  });
  const { model, trainLoss, valLoss } = train(dataset, config, (log) => {
    process.stderr.write(
      `epoch ${log.epoch}/${config.epochs} train_bce=${log.trainLoss.toFixed(6)} ` +
        `val_bce=${isNaN(log.valLoss) ? 'n/a' : log.valLoss.toFixed(6)} (${log.seconds.toFixed(1)}s)\n`,
    );
  });
  saveCheckpoint(argv.out, model, config, dataset.header, { trainLoss, valLoss });
  process.stderr.write(`saved checkpoint to ${argv.out}\n`);
  return 0;
}

async function cmdPredict(argv: any): Promise<number> {
  await initBackend(argv.backend);
  const { model, checkpoint } = loadCheckpoint(argv.checkpoint);
  const count = predictFile(model, checkpoint, argv.syndromes, argv.out);
  process.stderr.write(`wrote ${count} predictions to ${argv.out}\n`);
  return 0;
}

async function cmdServe(argv: any): Promise<number> {
  await initBackend(argv.backend);
  const { model, checkpoint } = loadCheckpoint(argv.checkpoint);
  if (argv.listen) {
    const [host, port] = String(argv.listen).split(':');
    if (!host || !/^\d+$/.test(port)) {
      throw new Error(`--listen expects HOST:PORT, got ${argv.listen}`);
    }
    await serveTcp(model, checkpoint, host, Number(port));
  } else {
    await serveStdio(model, checkpoint);
  }
  return 0;
}

export async function main(args: string[]): Promise<number> {
  const argv = await yargs(args)
    .scriptName('qgolay-nn')
    .command('train', 'train the decoder on a harness dataset file', (y) =>
      y
        .option('dataset', { type: 'string', demandOption: true })
        .option('out', { type: 'string', demandOption: true })
        .option('batch-size', { type: 'number' })
        .option('epochs', { type: 'number' })
        .option('learning-rate', { type: 'number' })
        .option('embed-dim', { type: 'number' })
        .option('heads', { type: 'number' })
        .option('layers', { type: 'number' })
        .option('val-split', { type: 'number' })
        .option('seed', { type: 'number' })
        .option('limit', { type: 'number', describe: 'use only the first N records' })
        .option('backend', { type: 'string' }),
    )
    .command('predict', 'decode a file of syndromes into label lines', (y) =>
      y
        .option('checkpoint', { type: 'string', demandOption: true })
        .option('syndromes', { type: 'string', demandOption: true })
        .option('out', { type: 'string', demandOption: true })
        .option('backend', { type: 'string' }),
    )
    .command('serve', 'serve the decoder over the wire protocol', (y) =>
      y
        .option('checkpoint', { type: 'string', demandOption: true })
        .option('listen', { type: 'string', describe: 'HOST:PORT; default stdio' })
        .option('backend', { type: 'string' }),
    )
    .command('experiment', 'train/evaluate a comparison suite end to end', (y) =>
      y
        .option('suite', { choices: ['eta', 'codes', 'weights'] as const, demandOption: true })
        .option('workdir', { type: 'string', demandOption: true })
        .option('train-count', { type: 'number', default: 80_000 })
        .option('test-count', { type: 'number', default: 20_000 })
        .option('epochs', { type: 'number', default: 8 })
        .option('embed-dim', { type: 'number', default: 48 })
        .option('heads', { type: 'number', default: 4 })
        .option('layers', { type: 'number', default: 2 })
        .option('batch-size', { type: 'number', default: 500 })
        .option('learning-rate', { type: 'number', default: 1e-3 })
        .option('seed', { type: 'number', default: 1 })
        .option('python', { type: 'string', default: 'python3' })
        .option('train-p', { type: 'number', describe: 'fixed training p (default: sweep grid)' })
        .option('backend', { type: 'string' }),
    )
    .demandCommand(1)
    .strict()
    .help()
    .parse();

  const command = argv._[0];
  if (command === 'train') return cmdTrain(argv);
  if (command === 'predict') return cmdPredict(argv);
  if (command === 'serve') return cmdServe(argv);
  if (command === 'experiment') {
    await initBackend((argv as any).backend);
    return runExperiment(argv as any);
  }
  throw new Error(`unknown command ${command}`);
}

if (require.main === module) {
  main(hideBin(process.argv))
    .then((code) => {
      process.exitCode = code;
    })
    .catch((err) => {
      process.stderr.write(`error: ${err.message ?? err}\n`);
      process.exitCode = 1;
    });
}
