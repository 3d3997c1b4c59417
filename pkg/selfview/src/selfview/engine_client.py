"""Lockstep pipe to the engine's stream mode.

One frame line written, one directive line read back. The engine flushes
per line, and the app validates frames before writing (the engine drops
malformed lines without emitting output, which would stall this lockstep
loop). The subprocess boundary is deliberate: the app exercises the
published wire format rather than linking the engine in-process.
"""

from __future__ import annotations

import shlex
import subprocess
import sys

from .wire import DirectiveView, parse_directive_line


class EngineDied(RuntimeError):
    """The engine process exited while the app still needed it."""


DEFAULT_ENGINE = f"{shlex.quote(sys.executable)} -m selfcue"


class EngineClient:
    """Owns the engine subprocess and the per-frame request/response."""

    def __init__(self, engine_cmd: str | None = None, config_path: str | None = None):
        cmd = shlex.split(engine_cmd) if engine_cmd else shlex.split(DEFAULT_ENGINE)
        cmd = cmd + ["stream"]
        if config_path:
            cmd += ["--config", config_path]
        try:
            self._proc = subprocess.Popen(
                cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                stderr=subprocess.PIPE, text=True, bufsize=1)
        except OSError as exc:
            raise EngineDied(f"cannot start engine {cmd!r}: {exc}") from exc

    def process_line(self, frame_line: str) -> DirectiveView:
        """Send one validated frame line, block for its directive."""
        proc = self._proc
        if proc.poll() is not None:
            raise EngineDied(self._death_note())
        try:
            proc.stdin.write(frame_line + "\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise EngineDied(self._death_note()) from exc
        reply = proc.stdout.readline()
        if not reply:
            raise EngineDied(self._death_note())
        return parse_directive_line(reply)

    def _death_note(self) -> str:
        code = self._proc.poll()
        tail = ""
        try:
            tail = self._proc.stderr.read() or ""
        except Exception:
            pass
        return f"engine process exited (code {code}): {tail.strip()[-500:]}"

    def close(self) -> None:
        proc = self._proc
        if proc.poll() is None:
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()

    def __enter__(self) -> "EngineClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
