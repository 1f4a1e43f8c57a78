"""Drive the HTTP service end to end: snapshot, mutations, delta stream.

Boots the server on a local port, injects a flow, downgrades the link it
runs over, and shows the pushed deltas a console client would consume.
"""

import json
import tempfile
import threading
import time
import urllib.request
from pathlib import Path

import uvicorn

from farsec.service import create_app, service_from_dir

RESOURCES = (
    "Source,Destination,Security\n"
    "s1,s2,4\ns2,s1,4\ns2,s3,4\ns3,s2,4\n"
    "s1,s4,4\ns4,s1,4\ns4,s3,4\ns3,s4,4\n"
)
SLA = (
    "Protocol,SourceAddress,DestinationAddress,DSCP,"
    "SourcePortMin,SourcePortMax,DestinationPortMin,DestinationPortMax,MinSec\n"
    "UDP,0.0.0.0/0,0.0.0.0/0,0,0,65535,5000,5005,3\n"
)
HOSTS = "Host,Switch,IP\nh1,s1,192.168.1.1\nh3,s3,192.168.3.1\n"

PORT = 8731
BASE = f"http://127.0.0.1:{PORT}"

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    (root / "resources.csv").write_text(RESOURCES, newline="")
    (root / "sla.csv").write_text(SLA, newline="")
    (root / "hosts.csv").write_text(HOSTS, newline="")
    service = service_from_dir(root)

server = uvicorn.Server(
    uvicorn.Config(create_app(service), host="127.0.0.1", port=PORT, log_level="error")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)


def get(path):
    with urllib.request.urlopen(BASE + path) as response:
        return json.loads(response.read())


def send(path, body, method="POST"):
    data = json.dumps(body).encode() if isinstance(body, dict) else body.encode()
    request = urllib.request.Request(BASE + path, data=data, method=method)
    request.add_header("Content-Type", "application/json")
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


snapshot = get("/api/state")
print(f"topology: {snapshot['topology']['nodes']} at version {snapshot['version']}")

from farsec import build_header  # noqa: E402
from farsec.sla import UDP  # noqa: E402

header = build_header(UDP, "192.168.1.1", "192.168.3.1", src_port=40001, dst_port=5000)
decision = send("/api/flows", {"source-host": "h1", "dest-host": "h3", "header-hex": header})
print(f"\ninjected flow {decision['flow_id']}: admitted={decision['admitted']} "
      f"path={decision['path']} (needs level {decision['requirement']})")

on_path = tuple(decision["path"][:2])
print(f"\ndowngrading link {on_path[0]}->{on_path[1]} to level 1...")
send("/api/link-security", {"src": on_path[0], "dst": on_path[1], "level": 1})

state = get("/api/state")
flow = state["flows"][0]
print(f"flow now: admitted={flow['admitted']} path={flow['path']}")

print("\ndeltas pushed to /api/events since version 0:")
request = urllib.request.Request(f"{BASE}/api/events?since=0&until={state['version']}")
with urllib.request.urlopen(request) as stream:
    for raw in stream:
        line = raw.decode().strip()
        if line.startswith("data: "):
            delta = json.loads(line[len("data: "):])
            kinds = {k: v for k, v in delta["changes"].items() if v}
            print(f"  v{delta['version']}: {', '.join(kinds) or 'no structural change'}; "
                  f"{len(delta['rule_diff'])} rule change(s)")

server.should_exit = True
thread.join(timeout=5)
print("\ndone")
