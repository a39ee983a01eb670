"""Smoke test for the scllab extension module.

Build it first, e.g. `pip install ./crates/python` or
`maturin develop -m crates/python/Cargo.toml`.
"""

import random

import scllab


def main():
    code = scllab.PolarCode(256, 128)
    assert (code.n, code.k) == (256, 128)
    assert len(code.info_set) + len(code.frozen_set) == 256

    rng = random.Random(3)
    info = [rng.randrange(2) for _ in range(code.k)]
    cw = code.encode(info)
    assert len(cw) == code.n

    clean = scllab.transmit(cw, 60.0, code.rate, seed=1, frame=0)
    assert scllab.decode_sc(code, clean) == info
    out = scllab.decode_scl(code, clean, 8)
    assert out.info_bits == info and out.metric == 0.0
    assert len(out.audit) > 0 and out.audit[0].startswith("bit=")

    noisy = scllab.transmit(cw, 1.5, code.rate, seed=1, frame=4)
    conv = scllab.decode_scl(code, noisy, 8, pruner="conventional")
    for pruner in ("proposed", "design1", "design2", "design3"):
        other = scllab.decode_scl(code, noisy, 8, pruner=pruner)
        assert other.decoded == conv.decoded and other.metric == conv.metric, pruner

    assert scllab.allowed_sources(1, 8) == (1, 5)
    ok, report = scllab.verify_proposition(4)
    assert ok and "PASS" in report
    assert scllab.estimate_lut_gain(10140, 4) == 2535
    assert scllab.latency_cycles(4096, 32) == 12928

    net = scllab.mvf_network(16)
    assert (net.comparators, net.depth, net.zero_one_ok) == (56, 7, True)
    assert scllab.bitonic_network(4).dump == "0<1 2>3\n0<2 1<3\n0<1 2<3\n"

    csv = scllab.simulate("n = 64\nk = 32\nlist_size = 4\nsnr_points_db = 2\nmax_frames = 50\n")
    assert csv.splitlines()[0] == "snr_db,frames,frame_errors,bit_errors,fer,ber,ci_lo,ci_hi"

    try:
        scllab.PolarCode(100, 10)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid block length accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
