#!/usr/bin/env python3
"""Generate the committed golden fixtures under tests/fixtures/.

The voice file comes from a fixed 6-judgment scripted session (seed and
choices below) finished at a pinned timestamp, so rerunning this script must
reproduce the committed bytes exactly. The WAV is that voice rendered with
the fixed fixture sentence. golden.json documents the expected field values
that the tests assert against.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from evoforge.evolution import EvolutionConfig
from evoforge.session import SessionManager
from evoforge.synth import SynthesisRequest, synthesize
from evoforge.voicefile import decode_voicefile
from evoforge.wav import encode_wav

GOLDEN_SEED = 777
GOLDEN_CHOICES = ["parent", "offspring", "offspring", "parent", "offspring", "parent"]
GOLDEN_CREATED_AT_MS = 1_700_000_000_000
GOLDEN_TEXT = "golden voice fixture"

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def build_fixture_bytes() -> tuple[bytes, bytes]:
    manager = SessionManager()
    session = manager.create_session(
        config=EvolutionConfig(rng_seed=GOLDEN_SEED), text=GOLDEN_TEXT
    )
    for pick in GOLDEN_CHOICES:
        pop = session.population
        chosen = pop.parent.id if pick == "parent" else pop.offspring[0].id
        manager.submit_judgment(session.session_id, chosen)
    manager.finish_session(session.session_id, created_at_ms=GOLDEN_CREATED_AT_MS)
    evvf = manager.voicefile_bytes(session.session_id)

    vf = decode_voicefile(evvf)
    clip = synthesize(SynthesisRequest(embedding=vf.embedding, text=GOLDEN_TEXT))
    return evvf, encode_wav(clip)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    evvf, wav = build_fixture_bytes()
    (FIXTURES / "golden.evvf").write_bytes(evvf)
    (FIXTURES / "golden.wav").write_bytes(wav)

    vf = decode_voicefile(evvf)
    doc = {
        "seed": GOLDEN_SEED,
        "choices": GOLDEN_CHOICES,
        "text": GOLDEN_TEXT,
        "voicefile": {
            "sha256": hashlib.sha256(evvf).hexdigest(),
            "size": len(evvf),
            "version": vf.version,
            "k": int(vf.pca_coeffs.shape[0]),
            "generations": vf.generations,
            "rng_seed": vf.rng_seed,
            "created_at_ms": vf.created_at_ms,
            "backend_hint": vf.backend_hint,
            "pca_coeffs": vf.pca_coeffs.tolist(),
            "embedding_sha256": hashlib.sha256(vf.embedding.tobytes()).hexdigest(),
        },
        "wav": {
            "sha256": hashlib.sha256(wav).hexdigest(),
            "size": len(wav),
        },
    }
    (FIXTURES / "golden.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {FIXTURES / 'golden.evvf'} ({len(evvf)} bytes)")
    print(f"wrote {FIXTURES / 'golden.wav'} ({len(wav)} bytes)")
    print(f"wrote {FIXTURES / 'golden.json'}")


if __name__ == "__main__":
    main()
