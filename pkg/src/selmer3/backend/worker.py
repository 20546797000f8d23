"""Stdin/stdout line-protocol backend worker.

One canonical JSON request per input line, one JSON response per output line;
errors are reported as {"error": ...} responses.  Run as:

    python -m selmer3.backend.worker
"""

import json
import sys

from . import embedded, schema


def serve(stdin=None, stdout=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            resp = embedded.handle(req)
        except Exception as exc:  # protocol errors surface to the client
            resp = {"schema": schema.SCHEMA_VERSION, "error": repr(exc)}
        stdout.write(schema.canonical(resp) + "\n")
        stdout.flush()


if __name__ == "__main__":
    serve()
