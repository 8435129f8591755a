"""Regenerate the golden service responses. Run from the repo root:

    python3 tests/generate_goldens.py

Goldens freeze the byte-exact wire format of every endpoint on the fixed
fixture session; regenerate only when the wire format intentionally changes.
"""

import sys
from pathlib import Path

from fastapi.testclient import TestClient

sys.path.insert(0, str(Path(__file__).parent))
from service_fixture import GOLDEN_REQUESTS, build_session  # noqa: E402

from caliper.service import create_app  # noqa: E402


def main() -> None:
    out_dir = Path(__file__).parent / "golden"
    out_dir.mkdir(exist_ok=True)
    client = TestClient(create_app())
    sid = build_session(client)
    for name, template in GOLDEN_REQUESTS.items():
        response = client.get(template.format(sid=sid))
        assert response.status_code == 200, (name, response.status_code, response.text)
        path = out_dir / f"{name}.json"
        path.write_bytes(response.content)
        print(f"wrote {path} ({len(response.content)} bytes)")


if __name__ == "__main__":
    main()
