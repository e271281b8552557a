import { spawn, type ChildProcess } from "node:child_process";

/** Outcome of one contraction, numbered exactly as on the wire. */
export enum ContractStatus {
  /** The box contains no solution; the bounds were left untouched. */
  Fail = 0,
  /** The written-back box satisfies the relation everywhere. */
  Entailed = 1,
  /** The bounds were narrowed. */
  Contract = 2,
  /** Already at a fixpoint; nothing changed. */
  Nothing = 3,
}

/** Raised for server-reported errors and for misuse of the handle. */
export class BridgeError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BridgeError";
  }
}

export interface BridgeOptions {
  /** Interpreter to run, by default `$HYBRIDCP_PYTHON` or `python3`. */
  python?: string;
  /** Environment for the server process, by default `process.env`. */
  env?: NodeJS.ProcessEnv;
}

const OP_CREATE = 1;
const OP_CONTRACT = 2;
const OP_CLOSE = 3;

const REPLY_OK = 0;
const REPLY_ERR = 1;

/** Reassembles length-prefixed frames from a byte stream. */
class FrameReader {
  private buffer = Buffer.alloc(0);
  private waiting: ((frame: Buffer | null) => void)[] = [];
  private ended = false;

  push(chunk: Buffer): void {
    this.buffer = Buffer.concat([this.buffer, chunk]);
    this.drain();
  }

  end(): void {
    this.ended = true;
    this.drain();
  }

  /** Resolves with the next complete frame, or null at end of stream. */
  next(): Promise<Buffer | null> {
    return new Promise((resolve) => {
      this.waiting.push(resolve);
      this.drain();
    });
  }

  private takeFrame(): Buffer | null {
    if (this.buffer.length < 4) return null;
    const length = this.buffer.readUInt32LE(0);
    if (this.buffer.length < 4 + length) return null;
    const frame = this.buffer.subarray(4, 4 + length);
    this.buffer = this.buffer.subarray(4 + length);
    return frame;
  }

  private drain(): void {
    while (this.waiting.length > 0) {
      const frame = this.takeFrame();
      if (frame !== null) {
        this.waiting.shift()!(frame);
      } else if (this.ended) {
        this.waiting.shift()!(null);
      } else {
        return;
      }
    }
  }
}

function decodeError(frame: Buffer): BridgeError {
  const length = frame.readUInt32LE(1);
  return new BridgeError(frame.subarray(5, 5 + length).toString("utf-8"));
}

/**
 * One connection to a contractor registry served by
 * `python -m hybridcp.bridge serve`.
 *
 * All methods are sequential: each request is written only after the
 * previous reply arrived, matching the one-request-at-a-time protocol.
 * Server-side errors (parse failures, unknown indices, malformed
 * bounds) reject the corresponding promise but leave the handle open.
 */
export class BridgeHandle {
  private readonly child: ChildProcess;
  private readonly reader = new FrameReader();
  private queue: Promise<unknown> = Promise.resolve();
  private open = true;
  private readonly exited: Promise<number | null>;

  private constructor(child: ChildProcess) {
    this.child = child;
    child.stdout!.on("data", (chunk: Buffer) => this.reader.push(chunk));
    child.stdout!.on("end", () => this.reader.end());
    this.exited = new Promise((resolve) => {
      child.on("exit", (code) => {
        this.open = false;
        resolve(code);
      });
    });
  }

  /** Spawns the server and resolves once the process is running. */
  static open(options: BridgeOptions = {}): Promise<BridgeHandle> {
    const python =
      options.python ?? process.env.HYBRIDCP_PYTHON ?? "python3";
    const child = spawn(python, ["-m", "hybridcp.bridge", "serve"], {
      stdio: ["pipe", "pipe", "inherit"],
      env: options.env ?? process.env,
    });
    return new Promise((resolve, reject) => {
      child.once("error", (err) =>
        reject(new BridgeError(`cannot start server: ${err.message}`)),
      );
      child.once("spawn", () => resolve(new BridgeHandle(child)));
    });
  }

  /**
   * Registers a contractor over `functions` (strings in the `{k}`
   * expression language, all sharing one scope of `arity` variables)
   * and resolves with its creation-order id, starting at 0.
   */
  createContractor(functions: string[], arity: number): Promise<number> {
    if (!Number.isInteger(arity) || arity < 1) {
      return Promise.reject(new BridgeError(`invalid arity ${arity}`));
    }
    const encoded = functions.map((f) => Buffer.from(f, "utf-8"));
    const payload = Buffer.alloc(
      9 + encoded.reduce((n, b) => n + 4 + b.length, 0),
    );
    payload.writeUInt8(OP_CREATE, 0);
    payload.writeUInt32LE(arity, 1);
    payload.writeUInt32LE(encoded.length, 5);
    let offset = 9;
    for (const text of encoded) {
      payload.writeUInt32LE(text.length, offset);
      text.copy(payload, offset + 4);
      offset += 4 + text.length;
    }
    return this.request(payload).then((reply) => reply.readInt32LE(1));
  }

  /**
   * Contracts `bounds` (flat `[x0.lo, x0.hi, x1.lo, x1.hi, ...]`) with
   * contractor `contIndex`. The array is overwritten in place with the
   * server's bit-exact result and the status is resolved. On Fail the
   * bounds come back untouched.
   */
  contract(contIndex: number, bounds: Float64Array): Promise<ContractStatus> {
    if (bounds.length === 0 || bounds.length % 2 !== 0) {
      return Promise.reject(
        new BridgeError(`bounds length ${bounds.length} is not 2*arity`),
      );
    }
    const arity = bounds.length / 2;
    const payload = Buffer.alloc(9 + 8 * bounds.length);
    payload.writeUInt8(OP_CONTRACT, 0);
    payload.writeUInt32LE(contIndex, 1);
    payload.writeUInt32LE(arity, 5);
    const view = new DataView(
      payload.buffer,
      payload.byteOffset + 9,
      8 * bounds.length,
    );
    for (let i = 0; i < bounds.length; i++) {
      view.setFloat64(8 * i, bounds[i], true);
    }
    return this.request(payload).then((reply) => {
      const status = reply.readUInt8(1) as ContractStatus;
      const body = reply.subarray(2);
      if (body.length !== 8 * bounds.length) {
        throw new BridgeError(
          `reply carries ${body.length} bound bytes, expected ${8 * bounds.length}`,
        );
      }
      const replyView = new DataView(
        body.buffer,
        body.byteOffset,
        body.length,
      );
      for (let i = 0; i < bounds.length; i++) {
        bounds[i] = replyView.getFloat64(8 * i, true);
      }
      return status;
    });
  }

  /**
   * Discards the registry and waits for the server to exit. A later
   * `BridgeHandle.open` starts numbering contractors from 0 again.
   */
  async close(): Promise<void> {
    await this.request(Buffer.from([OP_CLOSE]));
    this.open = false;
    this.child.stdin!.end();
    await this.exited;
  }

  /** Terminates the server immediately; pending calls reject. */
  kill(): void {
    this.open = false;
    this.child.kill("SIGKILL");
  }

  get isOpen(): boolean {
    return this.open;
  }

  private request(payload: Buffer): Promise<Buffer> {
    const send = async (): Promise<Buffer> => {
      if (!this.open) {
        throw new BridgeError("handle is closed");
      }
      const frame = Buffer.alloc(4 + payload.length);
      frame.writeUInt32LE(payload.length, 0);
      payload.copy(frame, 4);
      this.child.stdin!.write(frame);
      const reply = await this.reader.next();
      if (reply === null) {
        this.open = false;
        throw new BridgeError("server exited before replying");
      }
      if (reply.readUInt8(0) === REPLY_ERR) {
        throw decodeError(reply);
      }
      if (reply.readUInt8(0) !== REPLY_OK) {
        throw new BridgeError(`malformed reply tag ${reply.readUInt8(0)}`);
      }
      return reply;
    };
    // one outstanding request at a time; a rejected predecessor must
    // not block the queue
    const result = this.queue.then(send, send);
    this.queue = result.then(
      () => undefined,
      () => undefined,
    );
    return result;
  }
}
