"""A live adaptive identification session over the HTTP API.

The service picks each next question greedily from the answers so far; no
tree is ever materialized. This demo drives the API in-process (no
network); `querytree serve` exposes exactly the same endpoints over HTTP.
"""

from fastapi.testclient import TestClient

import querytree as qt
from querytree.io import instance_to_json
from querytree.service import create_app

toy = qt.ProblemInstance(
    responses=[[0, 1, 1], [1, 1, 0], [0, 1, 0], [1, 0, 0]],
    prior=[0.25] * 4,
    labels=(1, 1, 1, 2),
    object_names=("theta1", "theta2", "theta3", "theta4"),
    query_names=("fever", "nausea", "rash"),
)

client = TestClient(create_app())
instance_id = client.post("/instances", json=instance_to_json(toy)).json()["id"]
print("registered instance:", instance_id)

# The unknown "truth" the human is answering for:
truth = 3  # theta4, the only member of group 2
print(f"\nsimulating a responder whose true object is {toy.object_name(truth)} (group 2)\n")

state = client.post(
    "/sessions",
    json={"instance_id": instance_id, "config": {"lambda": "one", "mode": "group"}},
).json()

while state["status"]["state"] == "awaiting-answer":
    query = state["status"]["query"]
    bit = int(toy.responses[truth, query])
    print(f"service asks: {state['status']['query_name']!r}  ->  answer {'yes' if bit else 'no'}")
    print(f"  candidates before: {state['remaining_names']}")
    print(f"  posterior:         {[round(p, 3) for p in state['posterior']]}")
    state = client.post(
        f"/sessions/{state['id']}/answers", json={"bit": bit, "query": query}
    ).json()

status = state["status"]
print(f"\nidentified {status['kind']} {status['name']!r} "
      f"after {state['questions_asked']} question(s)")
print("transcript:", [(h["query_name"], h["bit"]) for h in state["history"]])
