import { ChildProcess, spawn } from 'node:child_process';
import * as net from 'node:net';
import * as path from 'node:path';
import * as readline from 'node:readline';

export const CLI = path.join(__dirname, '..', 'dist', 'cli.js');

/** Line-oriented request/response client over a child process or socket. */
export class LineClient {
  private queue: Array<(line: string) => void> = [];
  private closed = false;

  private constructor(
    private readonly write: (line: string) => void,
    private readonly finish: () => void,
    public readonly child?: ChildProcess,
  ) {}

  static overProcess(args: string[]): LineClient {
    const child = spawn(process.execPath, args, { stdio: ['pipe', 'pipe', 'inherit'] });
    const client = new LineClient(
      (line) => child.stdin!.write(line + '\n'),
      () => child.stdin!.end(),
      child,
    );
    child.stdin!.on('error', () => client.markClosed());
    const rl = readline.createInterface({ input: child.stdout!, crlfDelay: Infinity });
    rl.on('error', () => client.markClosed());
    rl.on('line', (line) => client.push(line));
    rl.on('close', () => client.markClosed());
    return client;
  }

  static async overSocket(host: string, port: number): Promise<LineClient> {
    const socket = net.createConnection({ host, port });
    await new Promise<void>((resolve, reject) => {
      socket.once('connect', resolve);
      socket.once('error', reject);
    });
    const client = new LineClient(
      (line) => socket.write(line + '\n'),
      () => socket.end(),
    );
    // the server may RST after BYE; treat any late error as a close
    // (readline re-emits input errors on itself, so handle both)
    socket.on('error', () => client.markClosed());
    const rl = readline.createInterface({ input: socket, crlfDelay: Infinity });
    rl.on('error', () => client.markClosed());
    rl.on('line', (line) => client.push(line));
    rl.on('close', () => client.markClosed());
    return client;
  }

  private push(line: string): void {
    const waiter = this.queue.shift();
    if (waiter) waiter(line);
  }

  private markClosed(): void {
    this.closed = true;
    for (const waiter of this.queue.splice(0)) waiter('<closed>');
  }

  send(line: string): void {
    this.write(line);
  }

  request(line: string, timeoutMs = 60_000): Promise<string> {
    if (this.closed) return Promise.resolve('<closed>');
    const reply = new Promise<string>((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error(`timeout waiting for reply to ${line}`)), timeoutMs);
      this.queue.push((l) => {
        clearTimeout(timer);
        resolve(l);
      });
    });
    this.write(line);
    return reply;
  }

  async close(): Promise<number | null> {
    this.send('BYE');
    this.finish();
    if (this.child) {
      return new Promise((resolve) => this.child!.once('exit', (code) => resolve(code)));
    }
    return null;
  }
}

export function randomSyndromes(count: number, width: number, seed = 7): string[] {
  const out: string[] = [];
  let state = seed >>> 0;
  for (let i = 0; i < count; i++) {
    let line = '';
    for (let j = 0; j < width; j++) {
      state = (state * 1664525 + 1013904223) >>> 0;
      line += state & 1 ? '1' : '0';
    }
    out.push(line);
  }
  return out;
}
