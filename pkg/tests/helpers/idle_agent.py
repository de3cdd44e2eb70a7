#!/usr/bin/env python3
"""Minimal wire agent: answers every request with idle, echoing the frame."""

import json
import sys

for line in sys.stdin:
    req = json.loads(line)
    reply = {"type": "decision", "text": f"frame {req['frame']}: DECISION: idle"}
    sys.stdout.write(json.dumps(reply) + "\n")
    sys.stdout.flush()
