"""Line-oriented decoder wire protocol (client and reference server).

Session, newline = LF, text only:

    client -> ``HELLO QGEC1 <code-id> <n_syndrome> <n_output>``
    server -> ``OK`` (or ``ERR <reason>``)
    repeat: client -> n_syndrome chars of 0/1; server -> n_output chars of 0/1
    client -> ``BYE``; server closes.

The transport is either the stdin/stdout of a subprocess or a local stream
socket; the two behave identically.  One request is in flight per
connection at a time.
"""

from __future__ import annotations

import shlex
import socket
import socketserver
import subprocess
import sys
from typing import IO

from .css import CssCode, PauliError, Syndrome
from .decoders import Decoder, DecoderOutcome
from .gf2 import BitVec

PROTOCOL_MAGIC = "QGEC1"


class ProtocolError(RuntimeError):
    """Wire-level failure: bad handshake, malformed frame, or dead channel."""


class SubprocessChannel:
    """Talk the protocol over a child process's stdin/stdout."""

    def __init__(self, command: str | list[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.describe = " ".join(argv)
        self._proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

    def send_line(self, line: str) -> None:
        assert self._proc.stdin is not None
        try:
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"decoder process closed stdin: {exc}") from exc

    def recv_line(self) -> str:
        assert self._proc.stdout is not None
        line = self._proc.stdout.readline()
        if line == "":
            raise ProtocolError("decoder process closed the channel")
        return line.rstrip("\n")

    def close(self) -> None:
        for stream in (self._proc.stdin, self._proc.stdout):
            if stream is not None:
                try:
                    stream.close()
                except OSError:
                    pass
        try:
            self._proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()


class SocketChannel:
    """Talk the protocol over a local stream socket."""

    def __init__(self, host: str, port: int):
        self.describe = f"{host}:{port}"
        self._sock = socket.create_connection((host, port))
        self._rfile = self._sock.makefile("r", newline="\n")
        self._wfile = self._sock.makefile("w", newline="\n")

    def send_line(self, line: str) -> None:
        try:
            self._wfile.write(line + "\n")
            self._wfile.flush()
        except OSError as exc:
            raise ProtocolError(f"socket write failed: {exc}") from exc

    def recv_line(self) -> str:
        line = self._rfile.readline()
        if line == "":
            raise ProtocolError("decoder server closed the channel")
        return line.rstrip("\n")

    def close(self) -> None:
        for f in (self._rfile, self._wfile):
            try:
                f.close()
            except OSError:
                pass
        try:
            self._sock.close()
        except OSError:
            pass


def open_channel(target: str) -> SubprocessChannel | SocketChannel:
    """`host:port` connects a socket; anything else runs as a command line."""
    host, sep, port = target.rpartition(":")
    if sep and host and port.isdigit() and "/" not in host and " " not in host:
        return SocketChannel(host, int(port))
    return SubprocessChannel(target)


class ExternalDecoder(Decoder):
    """Client for a remote decoder; offers no syndrome-consistency guarantee."""

    def __init__(self, channel: SubprocessChannel | SocketChannel, code: CssCode):
        super().__init__(code)
        self.channel = channel
        self.decoder_id = f"external:{channel.describe}"
        channel.send_line(
            f"HELLO {PROTOCOL_MAGIC} {code.name} {self.n_syndrome} {self.n_output}"
        )
        reply = channel.recv_line()
        if reply != "OK":
            channel.close()
            raise ProtocolError(f"handshake rejected: {reply!r}")

    def decode(self, s: Syndrome) -> DecoderOutcome:
        if s.bits.n != self.n_syndrome:
            raise ValueError(f"expected {self.n_syndrome} syndrome bits, got {s.bits.n}")
        self.channel.send_line(s.to01())
        line = self.channel.recv_line()
        if len(line) != self.n_output or line.strip("01"):
            raise ProtocolError(
                f"malformed correction (want {self.n_output} bits): {line!r}"
            )
        return DecoderOutcome(PauliError.from_label01(line), self.decoder_id)

    def close(self) -> None:
        try:
            self.channel.send_line("BYE")
        except ProtocolError:
            pass
        self.channel.close()

    def __enter__(self) -> ExternalDecoder:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _parse_hello(line: str, code: CssCode) -> str | None:
    parts = line.split()
    if len(parts) != 5 or parts[0] != "HELLO" or parts[1] != PROTOCOL_MAGIC:
        return "protocol"
    if parts[2] != code.name:
        return "code"
    if parts[3] != str(code.n_syndrome) or parts[4] != str(code.n_label):
        return "dims"
    return None


def serve_connection(decoder: Decoder, rfile: IO[str], wfile: IO[str]) -> None:
    """Answer one protocol session on an open text stream pair."""
    code = decoder.code

    def reply(line: str) -> None:
        wfile.write(line + "\n")
        wfile.flush()

    hello = rfile.readline()
    if hello == "":
        return
    problem = _parse_hello(hello.rstrip("\n"), code)
    if problem is not None:
        reply(f"ERR {problem}")
        return
    reply("OK")
    n_z = code.hz.nrows
    while True:
        line = rfile.readline()
        if line == "":
            return
        line = line.rstrip("\n")
        if line == "BYE":
            return
        if len(line) != code.n_syndrome or line.strip("01"):
            reply("ERR bits")
            continue
        s = Syndrome(BitVec.from01(line), n_z, code.n_syndrome - n_z)
        reply(decoder.decode(s).correction.to_label01())


def serve_stdio(decoder: Decoder) -> None:
    serve_connection(decoder, sys.stdin, sys.stdout)


def serve_tcp(decoder: Decoder, host: str, port: int) -> None:
    """Serve sessions sequentially; prints the bound address once ready."""

    class Handler(socketserver.BaseRequestHandler):
        def handle(self) -> None:
            with self.request.makefile("r", newline="\n") as rfile:
                with self.request.makefile("w", newline="\n") as wfile:
                    serve_connection(decoder, rfile, wfile)

    class Server(socketserver.TCPServer):
        allow_reuse_address = True

    with Server((host, port), Handler) as server:
        bound_host, bound_port = server.server_address[:2]
        print(f"LISTENING {bound_host} {bound_port}", flush=True)
        server.serve_forever()
