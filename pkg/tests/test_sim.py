import json

import numpy as np
import pytest

from fastpolar.construction import construct_code, save_descriptor
from fastpolar.crc import CRC8
from fastpolar.sim import (SimConfig, awgn_bpsk_llrs, load_sim_config, run_bler,
                           wilson_interval)


def small_cfg(**kw):
    base = dict(code=construct_code(5, 16, 0.5), snr_db=(2.0,), min_errors=20,
                max_frames=2000, seed=3, batch=64)
    base.update(kw)
    return SimConfig(**base)


def test_awgn_sign_limit():
    x = np.array([0, 1, 0, 1], np.uint8)
    llrs = awgn_bpsk_llrs(x, 1e-4, np.random.default_rng(0))
    assert ((llrs > 0) == (x == 0)).all()


def test_awgn_mean_scaling():
    sigma = 0.8
    rng = np.random.default_rng(1)
    llrs = awgn_bpsk_llrs(np.zeros(100_000, np.uint8), sigma, rng)
    mean, std = 2.0 / sigma**2, 2.0 / sigma
    assert abs(llrs.mean() - mean) < 4 * std / np.sqrt(llrs.size)
    assert llrs.std() == pytest.approx(std, rel=0.02)


def test_awgn_rejects_bad_sigma():
    with pytest.raises(ValueError):
        awgn_bpsk_llrs(np.zeros(4, np.uint8), 0.0, np.random.default_rng(0))


def test_wilson_interval_sanity():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0.0 < hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and hi - lo < 0.25
    assert wilson_interval(0, 0) == (0.0, 1.0)
    # coverage grows tighter with n
    assert wilson_interval(500, 1000)[1] - wilson_interval(500, 1000)[0] \
        < wilson_interval(50, 100)[1] - wilson_interval(50, 100)[0]


def test_run_is_deterministic():
    a = run_bler(small_cfg())
    b = run_bler(small_cfg())
    assert a.to_csv() == b.to_csv()


def test_counters_batch_size_invariant():
    a = run_bler(small_cfg(batch=7))
    b = run_bler(small_cfg(batch=64))
    for pa, pb in zip(a.points, b.points):
        assert (pa.frames, pa.frame_errors, pa.bit_errors) == \
            (pb.frames, pb.frame_errors, pb.bit_errors)


def test_seed_changes_noise():
    a = run_bler(small_cfg(seed=1))
    b = run_bler(small_cfg(seed=2))
    assert (a.points[0].frames, a.points[0].frame_errors) != \
        (b.points[0].frames, b.points[0].frame_errors)


def test_high_snr_near_zero_errors():
    cfg = small_cfg(snr_db=(8.0,), min_errors=1, max_frames=500)
    point = run_bler(cfg).points[0]
    assert point.bler < 0.02


def test_fastssc_matches_sc_counters():
    a = run_bler(small_cfg(decoder="sc"))
    b = run_bler(small_cfg(decoder="fastssc", enable_grep=True, enable_gpc=True))
    for pa, pb in zip(a.points, b.points):
        assert (pa.frames, pa.frame_errors, pa.bit_errors) == \
            (pb.frames, pb.frame_errors, pb.bit_errors)


def test_fast_list_matches_descent_counters():
    kw = dict(list_size=4, crc=CRC8, snr_db=(1.0, 2.5), min_errors=15, max_frames=1500)
    a = run_bler(small_cfg(decoder="scl", **kw))
    b = run_bler(small_cfg(decoder="ssclspc", enable_grep=True, enable_gpc=True, **kw))
    for pa, pb in zip(a.points, b.points):
        assert (pa.frames, pa.frame_errors, pa.bit_errors) == \
            (pb.frames, pb.frame_errors, pb.bit_errors)


def test_effective_rate_discounts_crc():
    cfg = small_cfg(decoder="scl", crc=CRC8)
    assert cfg.payload_bits == 8
    assert cfg.effective_rate == pytest.approx(8 / 32)
    # rate compensation makes ebn0 sigma larger than esn0 at the same dB
    assert cfg.sigma_for(2.0) > SimConfig(**{**cfg.__dict__, "snr_unit": "esn0"}).sigma_for(2.0)


def test_config_validation():
    code = construct_code(4, 8, 0.5)
    with pytest.raises(ValueError):
        SimConfig(code=code, snr_db=(2.0, 1.0))
    with pytest.raises(ValueError):
        SimConfig(code=code, decoder="viterbi")
    with pytest.raises(ValueError):
        SimConfig(code=code, min_errors=0)
    with pytest.raises(ValueError):
        SimConfig(code=code, crc=CRC8)  # 8 CRC bits leave no payload headroom
    with pytest.raises(ValueError):
        SimConfig(code=code, snr_unit="db")


def test_csv_format():
    out = run_bler(small_cfg(snr_db=(1.0, 3.0))).to_csv()
    lines = out.strip().split("\n")
    assert lines[0].startswith("snr_db,frames,")
    assert len(lines) == 3
    assert float(lines[1].split(",")[0]) == 1.0


def test_load_sim_config_round_trip(tmp_path):
    code = construct_code(5, 16, 0.5)
    save_descriptor(code, tmp_path / "code.json")
    cfg_raw = {"code": "code.json", "decoder": "ssclspc", "enable_grep": True,
               "enable_gpc": True, "list_size": 8, "crc": "crc8",
               "snr_db": [1.0, 2.0], "min_errors": 5, "max_frames": 100, "seed": 7}
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(cfg_raw))
    cfg = load_sim_config(path)
    assert np.array_equal(cfg.code.flags, code.flags)
    assert cfg.list_size == 8 and cfg.crc == CRC8
    assert cfg.snr_db == (1.0, 2.0)


def test_load_sim_config_rejects_unknown_fields(tmp_path):
    save_descriptor(construct_code(4, 8, 0.5), tmp_path / "code.json")
    path = tmp_path / "sim.json"
    path.write_text(json.dumps({"code": "code.json", "bogus": 1}))
    with pytest.raises(ValueError, match="bogus"):
        load_sim_config(path)


def test_load_sim_config_custom_crc(tmp_path):
    save_descriptor(construct_code(5, 16, 0.5), tmp_path / "code.json")
    path = tmp_path / "sim.json"
    path.write_text(json.dumps({"code": "code.json",
                                "crc": {"width": 4, "polynomial": 0x3}}))
    cfg = load_sim_config(path)
    assert cfg.crc.width == 4 and cfg.crc.polynomial == 0x3
