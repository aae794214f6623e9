"""Monte-Carlo BLER/BER estimation over BPSK/AWGN.

Every frame draws from its own counter-based RNG substream keyed by
(master seed, SNR index, frame index), so results are a pure function of
the configuration no matter how frames are batched or scheduled.  The
stop rule cuts off at the first frame whose error brings the cumulative
count to ``min_errors``, which keeps the counters batch-size invariant.
"""

import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .classify import PlanOptions, classify
from .codec import encode, sc_decode_batch
from .construction import PolarCode, load_descriptor
from .crc import CRC8, CRC16, CrcSpec, crc_attach
from .fastsc import fast_ssc_decode_batch
from .fastscl import fast_scl_decode_batch
from .listdec import scl_decode_batch

__all__ = ["SimConfig", "SimPoint", "SimResult", "awgn_bpsk_llrs", "run_bler",
           "load_sim_config"]

_CRC_NAMES = {"none": None, "crc8": CRC8, "crc16": CRC16}
_DECODERS = ("sc", "fastssc", "scl", "ssclspc")


def awgn_bpsk_llrs(x, sigma, rng):
    """BPSK-modulate bits, add N(0, sigma^2) noise, return channel LLRs."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x = np.asarray(x, dtype=np.float64)
    y = (1.0 - 2.0 * x) + sigma * rng.normal(size=x.shape)
    return 2.0 * y / sigma**2


@dataclass
class SimConfig:
    code: PolarCode
    decoder: str = "sc"
    enable_grep: bool = False
    enable_gpc: bool = False
    max_af: int = 0
    list_size: int = 1
    crc: CrcSpec | None = None
    snr_db: tuple = (1.0,)
    snr_unit: str = "ebn0"  # "ebn0" (rate-compensated) or "esn0"
    min_errors: int = 100
    max_frames: int = 1_000_000
    seed: int = 0
    minsum: bool = True
    batch: int = 1024

    def __post_init__(self):
        if self.decoder not in _DECODERS:
            raise ValueError(f"decoder must be one of {_DECODERS}")
        if self.min_errors < 1:
            raise ValueError("min_errors must be >= 1")
        snr = tuple(float(s) for s in self.snr_db)
        if not snr or any(b <= a for a, b in zip(snr, snr[1:])):
            raise ValueError("snr_db must be nonempty and strictly increasing")
        self.snr_db = snr
        if self.snr_unit not in ("ebn0", "esn0"):
            raise ValueError("snr_unit must be 'ebn0' or 'esn0'")
        crc_w = self.crc.width if self.crc else 0
        if crc_w >= self.code.K + (self.code.K == 0):
            raise ValueError("CRC wider than the unfrozen budget")

    @property
    def payload_bits(self):
        return self.code.K - (self.crc.width if self.crc else 0)

    @property
    def effective_rate(self):
        # CRC bits ride in unfrozen channels but carry no information
        return self.payload_bits / self.code.N

    def sigma_for(self, snr_db):
        lin = 10.0 ** (snr_db / 10.0)
        if self.snr_unit == "esn0":
            return float(np.sqrt(1.0 / (2.0 * lin)))
        return float(np.sqrt(1.0 / (2.0 * self.effective_rate * lin)))

    def plan_options(self):
        return PlanOptions(enable_grep=self.enable_grep, enable_gpc=self.enable_gpc,
                           max_af=self.max_af)


@dataclass
class SimPoint:
    snr_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    bler: float
    bler_ci_lo: float
    bler_ci_hi: float
    seconds: float


@dataclass
class SimResult:
    config_label: str
    points: list = field(default_factory=list)

    # wall-clock time stays off the CSV so reruns are byte-identical
    CSV_HEADER = "snr_db,frames,frame_errors,bit_errors,bler,bler_ci_lo,bler_ci_hi"

    def to_csv(self, fh=None):
        own = fh is None
        if own:
            fh = io.StringIO()
        fh.write(self.CSV_HEADER + "\n")
        for p in self.points:
            fh.write(f"{p.snr_db:g},{p.frames},{p.frame_errors},{p.bit_errors},"
                     f"{p.bler:.8e},{p.bler_ci_lo:.8e},{p.bler_ci_hi:.8e}\n")
        if own:
            return fh.getvalue()
        return None


def wilson_interval(k, n, z=1.959964):
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _frame_rng(seed, snr_idx, frame_idx):
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF,
                    ((snr_idx & 0xFFFFFF) << 40) | (frame_idx & 0xFFFFFFFFFF)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _make_decoder(cfg):
    code = cfg.code
    if cfg.decoder == "sc":
        return lambda llrs: sc_decode_batch(llrs, code, minsum=cfg.minsum)[0]
    if cfg.decoder == "fastssc":
        plan = classify(code, cfg.plan_options())
        return lambda llrs: fast_ssc_decode_batch(llrs, plan, minsum=cfg.minsum)[0]
    if cfg.decoder == "scl":
        return lambda llrs: scl_decode_batch(llrs, code, cfg.list_size, cfg.crc,
                                             minsum=cfg.minsum)[0]
    plan = classify(code, cfg.plan_options())
    return lambda llrs: fast_scl_decode_batch(llrs, code, plan, cfg.list_size, cfg.crc,
                                              minsum=cfg.minsum)[0]


def _gen_frames(cfg, snr_idx, start, count, sigma):
    """Payloads and channel LLRs for frames [start, start+count)."""
    N = cfg.code.N
    nbits = cfg.payload_bits
    info = cfg.code.info_indices
    payloads = np.empty((count, nbits), dtype=np.uint8)
    llrs = np.empty((count, N))
    for k in range(count):
        rng = _frame_rng(cfg.seed, snr_idx, start + k)
        payload = rng.integers(0, 2, nbits, dtype=np.uint8)
        bits = crc_attach(payload, cfg.crc) if cfg.crc else payload
        u = np.zeros(N, dtype=np.uint8)
        u[info] = bits
        payloads[k] = payload
        llrs[k] = awgn_bpsk_llrs(encode(u, cfg.code), sigma, rng)
    return payloads, llrs


def run_bler(cfg, label=""):
    """Run the Monte-Carlo sweep described by ``cfg``."""
    decode = _make_decoder(cfg)
    info = cfg.code.info_indices
    nbits = cfg.payload_bits
    result = SimResult(config_label=label or cfg.decoder)
    for snr_idx, snr in enumerate(cfg.snr_db):
        sigma = cfg.sigma_for(snr)
        t0 = time.perf_counter()
        frames = ferr = berr = 0
        while frames < cfg.max_frames and ferr < cfg.min_errors:
            nb = min(cfg.batch, cfg.max_frames - frames)
            payloads, llrs = _gen_frames(cfg, snr_idx, frames, nb, sigma)
            u_hat = decode(llrs)
            decoded = u_hat[:, info][:, :nbits]
            bit_err = (decoded != payloads).sum(axis=1)
            frame_err = bit_err > 0
            cum = ferr + np.cumsum(frame_err)
            if cum[-1] >= cfg.min_errors:
                keep = int(np.argmax(cum >= cfg.min_errors)) + 1
            else:
                keep = nb
            ferr += int(frame_err[:keep].sum())
            berr += int(bit_err[:keep].sum())
            frames += keep
        lo, hi = wilson_interval(ferr, frames)
        result.points.append(SimPoint(
            snr_db=snr, frames=frames, frame_errors=ferr, bit_errors=berr,
            bler=ferr / frames if frames else 0.0, bler_ci_lo=lo, bler_ci_hi=hi,
            seconds=time.perf_counter() - t0))
    return result


def load_sim_config(path):
    """Read a simulation config JSON; the code descriptor path is resolved
    relative to the config file."""
    import os

    with open(path) as fh:
        raw = json.load(fh)
    code_path = raw.pop("code")
    if not os.path.isabs(code_path):
        code_path = os.path.join(os.path.dirname(os.path.abspath(path)), code_path)
    code = load_descriptor(code_path)
    crc = raw.pop("crc", "none")
    if isinstance(crc, str):
        crc = _CRC_NAMES[crc]
    elif isinstance(crc, dict):
        crc = CrcSpec(**crc)
    known = {f for f in SimConfig.__dataclass_fields__} - {"code", "crc"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    return SimConfig(code=code, crc=crc, **raw)
