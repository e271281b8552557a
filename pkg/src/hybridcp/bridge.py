"""Foreign-caller endpoint: the contract protocol over stdio.

``python -m hybridcp.bridge serve`` runs a registry-owning server that
speaks length-prefixed binary frames on stdin/stdout, so a client in any
language can create contractors and contract bounds without linking
against Python.  Floats cross the boundary as raw little-endian IEEE-754
doubles; the bounds a client reads back are bit-identical to what a
direct in-process call produces.

Frame layout (all integers little-endian):

    frame    := u32 length, then `length` payload bytes
    request  := CREATE | CONTRACT | CLOSE
    CREATE   := u8 1, u32 arity, u32 nfuncs, nfuncs * (u32 len, utf-8 text)
    CONTRACT := u8 2, u32 cont_index, u32 arity, 2*arity * f64 bounds
    CLOSE    := u8 3

    reply    := OK | ERR
    OK(create)   := u8 0, i32 cont_index
    OK(contract) := u8 0, u8 status, 2*arity * f64 bounds
    OK(close)    := u8 0
    ERR          := u8 1, u32 len, utf-8 message

Server-side failures (parse errors, unknown contractor indices,
malformed bounds) produce ERR replies; the server keeps serving.  CLOSE
acknowledges and exits, discarding the registry, so a new connection
starts numbering contractors from zero again.

``python -m hybridcp.bridge vectors`` prints the canonical replay suite
(:data:`VECTOR_CASES` evaluated against the in-process engine) as JSON,
with bounds hex-encoded for bit-exact comparison by foreign test
harnesses.
"""
from __future__ import annotations

import io
import json
import struct
import sys
from typing import BinaryIO, Optional

from .contractor import (
    ContractorRegistry,
    MalformedBoundsError,
    UnknownContractorError,
    contract,
)
from .exprs import ParseError

OP_CREATE = 1
OP_CONTRACT = 2
OP_CLOSE = 3

REPLY_OK = 0
REPLY_ERR = 1


def _read_exact(stream: BinaryIO, n: int) -> Optional[bytes]:
    chunks = b""
    while len(chunks) < n:
        piece = stream.read(n - len(chunks))
        if not piece:
            return None
        chunks += piece
    return chunks


def read_frame(stream: BinaryIO) -> Optional[bytes]:
    header = _read_exact(stream, 4)
    if header is None:
        return None
    (length,) = struct.unpack("<I", header)
    if length == 0:
        return b""
    return _read_exact(stream, length)


def write_frame(stream: BinaryIO, payload: bytes) -> None:
    stream.write(struct.pack("<I", len(payload)) + payload)
    stream.flush()


def _err(message: str) -> bytes:
    data = message.encode("utf-8")
    return struct.pack("<BI", REPLY_ERR, len(data)) + data


def _handle_create(registry: ContractorRegistry, body: bytes) -> bytes:
    offset = 0
    arity, nfuncs = struct.unpack_from("<II", body, offset)
    offset += 8
    functions = []
    for _ in range(nfuncs):
        (length,) = struct.unpack_from("<I", body, offset)
        offset += 4
        functions.append(body[offset : offset + length].decode("utf-8"))
        offset += length
    try:
        cont_index = registry.create_contractor(functions, arity)
    except ParseError as exc:
        return _err(str(exc))
    return struct.pack("<Bi", REPLY_OK, cont_index)


def _handle_contract(registry: ContractorRegistry, body: bytes) -> bytes:
    cont_index, arity = struct.unpack_from("<II", body, 0)
    bounds = list(struct.unpack_from(f"<{2 * arity}d", body, 8))
    try:
        status = contract(registry, cont_index, bounds)
    except (UnknownContractorError, MalformedBoundsError) as exc:
        return _err(str(exc))
    return (
        struct.pack("<BB", REPLY_OK, int(status))
        + struct.pack(f"<{len(bounds)}d", *bounds)
    )


def serve(stdin: BinaryIO, stdout: BinaryIO) -> None:
    """Serve one connection until CLOSE or end of input."""
    registry = ContractorRegistry()
    while True:
        frame = read_frame(stdin)
        if frame is None:
            return
        if not frame:
            write_frame(stdout, _err("empty request"))
            continue
        opcode = frame[0]
        body = frame[1:]
        try:
            if opcode == OP_CREATE:
                reply = _handle_create(registry, body)
            elif opcode == OP_CONTRACT:
                reply = _handle_contract(registry, body)
            elif opcode == OP_CLOSE:
                write_frame(stdout, struct.pack("<B", REPLY_OK))
                return
            else:
                reply = _err(f"unknown opcode {opcode}")
        except struct.error as exc:
            reply = _err(f"malformed request: {exc}")
        write_frame(stdout, reply)


# ---------------------------------------------------------------------------
# Canonical replay vectors.
#
# Each case is (functions, arity, bounds).  The expected status and
# output bounds are whatever the in-process engine computes; foreign
# bindings must reproduce them bit for bit.  The list deliberately walks
# every operator the expression language knows.
# ---------------------------------------------------------------------------

VECTOR_CASES: list[tuple[list[str], int, list[float]]] = [
    (["{0}+{1}=10"], 2, [0.0, 10.0, 0.0, 3.0]),
    (["{0}={1}"], 2, [0.0, 1.0, 2.0, 3.0]),
    (["{0}<{1}"], 2, [0.0, 1.0, 2.0, 3.0]),
    (["{0}={0}"], 1, [1.0, 2.0]),
    (["{0}+{1}={2}", "{0}-{1}={2}"], 3, [-10.0, 10.0, -10.0, 10.0, 4.0, 4.0]),
    (["{0}*{1}={2}"], 3, [2.0, 5.0, 3.0, 4.0, -100.0, 7.0]),
    (["{0}/{1}={2}"], 3, [1.0, 8.0, -2.0, 2.0, 0.5, 1.5]),
    (["{0}*{0}={1}"], 2, [-10.0, 10.0, 4.0, 9.0]),
    (["sqr({0})={1}"], 2, [-10.0, 10.0, 4.0, 9.0]),
    (["sqrt({0})={1}"], 2, [-4.0, 9.0, 0.0, 2.0]),
    (["abs({0}-{1})<=1"], 2, [0.0, 10.0, 5.0, 5.0]),
    (["sign({0})=1"], 1, [-3.0, 8.0]),
    (["min({0},{1})>=2"], 2, [0.0, 5.0, 1.0, 6.0]),
    (["max({0},{1})<=4"], 2, [0.0, 5.0, 1.0, 6.0]),
    (["pow({0},3)={1}"], 2, [-5.0, 5.0, -8.0, 27.0]),
    (["pow({0},2)<{1}"], 2, [-5.0, 5.0, 0.0, 16.0]),
    (["exp({0})={1}"], 2, [-1.0, 2.0, 0.0, 3.0]),
    (["log({0})={1}"], 2, [0.5, 10.0, 0.0, 1.0]),
    (["cos({0})={1}"], 2, [0.0, 3.0, -0.5, 0.5]),
    (["sin({0})>=0"], 1, [-1.0, 1.0]),
    (["tan({0})={1}"], 2, [-1.0, 1.0, -1.0, 1.0]),
    (["acos({0})={1}"], 2, [-1.0, 1.0, 0.0, 1.0]),
    (["asin({0})={1}"], 2, [-1.0, 1.0, -0.5, 0.5]),
    (["atan({0})={1}"], 2, [-10.0, 10.0, -0.5, 0.5]),
    (["atan2({0},{1})={2}"], 3, [1.0, 2.0, 1.0, 2.0, 0.0, 1.0]),
    (["cosh({0})={1}"], 2, [-2.0, 2.0, 1.0, 2.0]),
    (["sinh({0})={1}"], 2, [-2.0, 2.0, -1.0, 1.0]),
    (["tanh({0})={1}"], 2, [-2.0, 2.0, 0.0, 0.5]),
    (["acosh({0})={1}"], 2, [1.0, 10.0, 0.0, 1.0]),
    (["asinh({0})={1}"], 2, [-10.0, 10.0, -1.0, 1.0]),
    (["atanh({0})={1}"], 2, [-0.9, 0.9, -0.5, 0.5]),
    (["-{0}={1}"], 2, [-3.0, 7.0, -2.0, 5.0]),
    (["({0}+{1})/2={2}", "{0}<={1}"], 3, [0.0, 10.0, 0.0, 10.0, 7.0, 7.0]),
    (["{0}*{1}+{2}=0"], 3, [-2.0, 3.0, -1.0, 4.0, -6.0, 6.0]),
    (["2*{0}+3>={1}"], 2, [0.0, 4.0, 10.0, 20.0]),
    (["{0}>{1}"], 2, [5.0, 9.0, 1.0, 2.0]),
    (["{0}<=3"], 1, [0.0, 10.0]),
    (["{0}>=2.5"], 1, [0.0, 1.0]),
    (
        ["({0}+{1}+{2})/3={3}", "(abs({0}-{3})+abs({1}-{3})+abs({2}-{3}))/3={4}"],
        5,
        [17.0, 17.0, 23.0, 23.0, 24.0, 24.0, 5.0, 24.0, 0.0, 24.0],
    ),
]


def build_vectors() -> list[dict]:
    """Evaluate :data:`VECTOR_CASES` in-process; returns replayable records."""
    registry = ContractorRegistry()
    records = []
    for functions, arity, bounds in VECTOR_CASES:
        cont_index = registry.create_contractor(functions, arity)
        work = list(bounds)
        status = contract(registry, cont_index, work)
        records.append(
            {
                "functions": list(functions),
                "arity": arity,
                "cont_index": cont_index,
                "bounds_hex": struct.pack(f"<{len(bounds)}d", *bounds).hex(),
                "status": int(status),
                "contracted_hex": struct.pack(f"<{len(work)}d", *work).hex(),
            }
        )
    return records


def main(argv: Optional[list[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    command = args[0] if args else "serve"
    if command == "serve":
        stdin = sys.stdin.buffer
        stdout = sys.stdout.buffer
        serve(stdin, stdout)
        return 0
    if command == "vectors":
        json.dump(build_vectors(), sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0
    print(f"unknown command {command!r}; expected 'serve' or 'vectors'", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
