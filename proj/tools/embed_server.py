#!/usr/bin/env python3
"""Serve a sentence-transformers model over the `dox` remote-backend protocol.

    POST <prefix>/embed  {"model": str, "role": "query"|"passage", "texts": [str]}
                      -> {"dims": int, "vectors": [[float]]}

Example:
    python3 tools/embed_server.py --model sentence-transformers/multi-qa-MiniLM-L6-cos-v1
    dox compute --backend http://127.0.0.1:8088 --model multi-qa ...
"""

import argparse
import json
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from sentence_transformers import SentenceTransformer


def make_handler(model, prefix, token, query_prefix, passage_prefix):
    class Handler(BaseHTTPRequestHandler):
        def _reply(self, status, payload):
            body = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_POST(self):
            if self.path.rstrip("/") != prefix + "/embed":
                return self._reply(404, {"error": "unknown path"})
            if token and self.headers.get("Authorization") != f"Bearer {token}":
                return self._reply(401, {"error": "bad token"})
            try:
                req = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
                texts = req["texts"]
                lead = query_prefix if req["role"] == "query" else passage_prefix
            except (KeyError, ValueError, TypeError) as e:
                return self._reply(400, {"error": f"bad request: {e}"})
            vectors = model.encode([lead + t for t in texts], normalize_embeddings=True)
            self._reply(200, {"dims": int(vectors.shape[1]), "vectors": vectors.tolist()})

        def log_message(self, *args):
            pass

    return Handler


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", required=True, help="sentence-transformers model name or path")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8088)
    ap.add_argument("--prefix", default="", help="path prefix, e.g. /v1")
    ap.add_argument("--query-prefix", default="", help='text prepended to queries, e.g. "query: "')
    ap.add_argument("--passage-prefix", default="", help='text prepended to passages, e.g. "passage: "')
    args = ap.parse_args()

    model = SentenceTransformer(args.model)
    handler = make_handler(model, args.prefix.rstrip("/"), os.environ.get("DOX_BACKEND_TOKEN"),
                           args.query_prefix, args.passage_prefix)
    server = ThreadingHTTPServer((args.host, args.port), handler)
    print(f"serving {args.model} on http://{args.host}:{args.port}{args.prefix}")
    server.serve_forever()


if __name__ == "__main__":
    main()
