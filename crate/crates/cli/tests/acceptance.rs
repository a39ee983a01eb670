//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scllab_core::channel::{llr_from_sample, modulate};
use scllab_core::costmodel::{
    bundled_table2, estimate_lut_gain, latency_cycles, sc_latency_cycles,
};
use scllab_core::harness::{run_equivalence, run_fer, SimConfig};
use scllab_core::pruning::{
    apply_network, apply_network_by, build_bitonic, build_mvf, candidates_from_metrics,
    prune_proposed, verify_zero_one, CompareExchangeNetwork,
};
use scllab_core::scl::PruningEvent;
use scllab_core::{
    allowed_sources, decode_sc, decode_scl, make_design_sorter, transmit, ChannelConfig,
    ConventionalPruner, CrossbarSpec, PathState, PolarCode, ProposedPruner, Pruner, SclDecoder,
    SorterDesign,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 crossbar proposition, L=2,4,8", proposition),
        ("2 crossbar LUT gains", lut_gains),
        ("3 latency", latency),
        ("4 conventional/proposed equivalence", equivalence),
        ("5 sorter networks", sorter_networks),
        ("6 decoder sanity", decoder_sanity),
        ("7 reduced crossbar end to end", reduced_crossbar),
        ("8 simulate determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn scllab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scllab"))
}

/// Allowed sources by the closed form ceil(k/2) ..= ceil((L+k)/2).
fn oracle_allowed(k: usize, l: usize) -> (usize, usize) {
    (k.div_ceil(2), (l + k).div_ceil(2))
}

fn proposition() -> Outcome {
    let start = Instant::now();
    let out = scllab()
        .args(["audit-proposition", "--list", "2,4,8"])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    ensure!(
        out.status.success(),
        "audit-proposition exited with {}:\n{text}",
        out.status
    );
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    for header in ["L=2: all 6 ", "L=4: all 70 ", "L=8: all 12870 "] {
        ensure!(text.contains(header), "missing {header:?} in\n{text}");
    }
    ensure!(
        text.matches("result: PASS").count() == 3,
        "not all PASS:\n{text}"
    );

    // Independent sweep over bitmasks.
    let mut total = 0u64;
    for l in [2usize, 4, 8] {
        for k in 1..=l {
            let (lo, hi) = oracle_allowed(k, l);
            let lib = allowed_sources(k, l).unwrap();
            ensure!(
                (*lib.start(), *lib.end()) == (lo, hi),
                "allowed({k},{l}) = {lib:?}"
            );
            ensure!(hi - lo + 1 == l / 2 + 1, "size of allowed({k},{l})");
        }
        for mask in 0u32..1 << (2 * l) {
            if mask.count_ones() as usize != l {
                continue;
            }
            total += 1;
            let survivors = (1..=2 * l).filter(|i| mask >> (i - 1) & 1 == 1);
            for (pos, i) in survivors.enumerate() {
                let (lo, hi) = oracle_allowed(pos + 1, l);
                let parent = i.div_ceil(2);
                ensure!(
                    (lo..=hi).contains(&parent),
                    "L={l} mask={mask:b} slot {} parent {parent}",
                    pos + 1
                );
            }
        }
    }
    ensure!(total == 6 + 70 + 12870, "oracle enumerated {total} subsets");
    Ok(format!(
        "{total} subsets, CLI {:.3}s",
        elapsed.as_secs_f64()
    ))
}

fn lut_gains() -> Outcome {
    // Published gains, rows L = 4, 8, 16, 32 and columns N = 2048, 4096, 8192.
    const PUBLISHED: [[u64; 3]; 4] = [
        [2535, 4737, 14778],
        [18600, 29675, 107374],
        [92125, 186645, 628805],
        [399670, 919793, 3098781],
    ];
    let cells = bundled_table2();
    ensure!(cells.len() == 12, "bundled table has {} cells", cells.len());
    for c in &cells {
        let row = [4, 8, 16, 32]
            .iter()
            .position(|&l| l == c.list_size)
            .unwrap();
        let col = [2048, 4096, 8192]
            .iter()
            .position(|&n| n == c.block_length)
            .unwrap();
        let l = c.list_size as f64;
        let oracle = (c.luts as f64 * (l - 2.0) / (2.0 * l) + 0.5).floor() as u64;
        let got = estimate_lut_gain(c.luts, c.list_size).unwrap();
        ensure!(
            got == PUBLISHED[row][col] && oracle == got,
            "L={} N={}: got {got}, oracle {oracle}, published {}",
            c.list_size,
            c.block_length,
            PUBLISHED[row][col]
        );
    }
    Ok("12/12 cells exact".into())
}

fn latency() -> Outcome {
    let (n, p) = (4096usize, 32usize);
    let sc_oracle = 2 * n + (n / p) * ((n / (4 * p)).ilog2() as usize);
    let sc = sc_latency_cycles(n, p).unwrap();
    let total = latency_cycles(n, p).unwrap();
    ensure!(
        sc == 8832 && sc as usize == sc_oracle,
        "SC part {sc}, oracle {sc_oracle}"
    );
    ensure!(total - sc == n as u64, "pruning part {}", total - sc);
    ensure!(total == 12928, "latency {total}");
    Ok(format!("{total} = {sc} + {n}"))
}

fn equivalence() -> Outcome {
    let cfg = SimConfig {
        snr_points_db: vec![1.5, 2.0, 2.5],
        max_frames: 10_000,
        ..SimConfig::default()
    };
    ensure!(
        (cfg.n, cfg.k, cfg.list_size) == (1024, 512, 8),
        "preset changed"
    );
    let report = run_equivalence(&cfg).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for p in &report.points {
        ensure!(p.frames == 10_000, "{} frames at {} dB", p.frames, p.snr_db);
        detail.push(format!(
            "{}dB: {} mismatches, FER {}/{}",
            p.snr_db, p.mismatches, p.conventional_frame_errors, p.proposed_frame_errors
        ));
    }
    ensure!(report.passed(), "{report}");
    Ok(detail.join("; "))
}

fn zero_one_oracle(net: &CompareExchangeNetwork, selector: bool) -> bool {
    let w = net.width();
    (0u32..1 << w).all(|mask| {
        let mut lanes: Vec<u8> = (0..w).map(|j| (mask >> j & 1) as u8).collect();
        let ones = lanes.iter().filter(|&&b| b == 1).count();
        apply_network(net, &mut lanes);
        if selector {
            let low_ones = lanes[..w / 2].iter().filter(|&&b| b == 1).count();
            low_ones == ones.saturating_sub(w / 2)
        } else {
            lanes.windows(2).all(|p| p[0] <= p[1])
        }
    })
}

fn sorter_networks() -> Outcome {
    for w in [4, 8, 16] {
        let bitonic = build_bitonic(w).unwrap();
        ensure!(
            verify_zero_one(&bitonic).unwrap().passed(),
            "bitonic({w}) 0-1"
        );
        ensure!(zero_one_oracle(&bitonic, false), "bitonic({w}) oracle");
        let mvf = build_mvf(w).unwrap();
        ensure!(verify_zero_one(&mvf).unwrap().passed(), "mvf({w}) 0-1");
        ensure!(zero_one_oracle(&mvf, true), "mvf({w}) oracle");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for w in [32, 64] {
        let mvf = build_mvf(w).unwrap();
        for t in 0..100_000 {
            // Every other input draws from a small alphabet to force ties.
            let mut lanes: Vec<u32> = if t % 2 == 0 {
                (0..w).map(|_| rng.random()).collect()
            } else {
                (0..w).map(|_| rng.random_range(0..4)).collect()
            };
            let mut expected = lanes.clone();
            expected.sort_unstable();
            apply_network_by(&mvf, &mut lanes, |a, b| a.cmp(b));
            let mut low = lanes[..w / 2].to_vec();
            low.sort_unstable();
            ensure!(low == expected[..w / 2], "mvf({w}) input {t}");
        }
    }

    for l in [4usize, 8, 16] {
        let designs: Vec<_> = SorterDesign::ALL
            .iter()
            .map(|&d| make_design_sorter(d, l).unwrap())
            .collect();
        for t in 0..100_000 {
            let metrics: Vec<f64> = if t % 2 == 0 {
                (0..2 * l).map(|_| rng.random::<f64>() * 10.0).collect()
            } else {
                (0..2 * l)
                    .map(|_| f64::from(rng.random_range(0..3u8)))
                    .collect()
            };
            let c = candidates_from_metrics(&metrics);
            let want = prune_proposed(&c).unwrap();
            for d in &designs {
                let got = d.prune(&c).unwrap();
                ensure!(got.ordered == want.ordered, "{} L={l} set {t}", d.design());
            }
        }
    }
    Ok("0-1 widths 4-16, MVF 2x1e5 random, designs 9x1e5 sets".into())
}

fn decoder_sanity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (n, k) in [(16, 8), (1024, 512)] {
        let code = PolarCode::construct(n, k, 0.5).unwrap();
        let spec = CrossbarSpec::reduced(8).unwrap();
        let dec = SclDecoder::new(&code, 8, &ProposedPruner, &spec).unwrap();
        for f in 0..1000 {
            let info: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
            let llrs: Vec<f64> = code
                .encode(&info)
                .unwrap()
                .iter()
                .map(|&b| llr_from_sample(modulate(b), 0.5))
                .collect();
            let out = dec.decode(&llrs).unwrap();
            ensure!(
                out.info_bits == info && out.metric == 0.0,
                "noiseless N={n} frame {f}"
            );
        }
    }

    let code = PolarCode::construct(1024, 512, 0.5).unwrap();
    let single = CrossbarSpec::conventional(1).unwrap();
    let mut sc_errors = 0;
    for f in 0..1000u64 {
        let snr = [1.0, 1.5, 2.0, 2.5, 3.0][f as usize % 5];
        let cfg = ChannelConfig::new(snr, code.rate(), 21).unwrap();
        let info: Vec<u8> = (0..512).map(|_| rng.random_range(0..2u8)).collect();
        let llrs = transmit(&code.encode(&info).unwrap(), &cfg, f);
        let sc = decode_sc(&code, &llrs).unwrap();
        let scl = decode_scl(&code, &llrs, 1, &ConventionalPruner, &single).unwrap();
        ensure!(sc == scl.info_bits, "L=1 differs from SC on frame {f}");
        sc_errors += u32::from(sc != info);
    }
    ensure!(
        sc_errors > 0,
        "noisy frames never failed; SC comparison is vacuous"
    );

    let cfg = SimConfig {
        snr_points_db: vec![1.5, 2.5],
        ..SimConfig::default()
    };
    let r = run_fer(&cfg).map_err(|e| e.to_string())?;
    let (lo, hi) = (&r.points[0], &r.points[1]);
    ensure!(
        hi.fer.total_cmp(&lo.fer).is_lt(),
        "FER {} at 2.5 dB vs {} at 1.5 dB",
        hi.fer,
        lo.fer
    );
    ensure!(
        !lo.intervals_overlap(hi),
        "intervals overlap: [{}, {}] vs [{}, {}]",
        lo.ci_lo,
        lo.ci_hi,
        hi.ci_lo,
        hi.ci_hi
    );
    Ok(format!(
        "FER 1.5dB {:.4} [{:.4},{:.4}], 2.5dB {:.4} [{:.4},{:.4}]; {sc_errors} SC frame errors matched",
        lo.fer, lo.ci_lo, lo.ci_hi, hi.fer, hi.ci_lo, hi.ci_hi
    ))
}

fn reduced_crossbar() -> Outcome {
    let (n, k, l) = (256, 128, 8);
    let code = PolarCode::construct(n, k, 0.5).unwrap();
    let reduced = CrossbarSpec::reduced(l).unwrap();
    let full = CrossbarSpec::conventional(l).unwrap();
    let with_reduced = SclDecoder::new(&code, l, &ProposedPruner, &reduced)
        .unwrap()
        .without_audit();
    let with_full = SclDecoder::new(&code, l, &ProposedPruner, &full)
        .unwrap()
        .without_audit();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut events = 0u64;
    for f in 0..10_000u64 {
        let snr = [0.5, 1.0, 1.5, 2.0, 2.5][f as usize % 5];
        let cfg = ChannelConfig::new(snr, code.rate(), 70).unwrap();
        let info: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
        let llrs = transmit(&code.encode(&info).unwrap(), &cfg, f);

        let mut expected: Vec<(PruningEvent, Vec<PathState>)> = Vec::new();
        let a = with_full
            .decode_observed(&llrs, |e, paths| expected.push((e.clone(), paths.to_vec())))
            .map_err(|e| format!("unrestricted frame {f}: {e}"))?;
        let mut step = 0;
        let mut mismatch = None;
        let b = with_reduced
            .decode_observed(&llrs, |e, paths| {
                let (want_event, want_paths) = &expected[step];
                let parents_ok =
                    e.sources
                        .iter()
                        .zip(&e.survivors)
                        .enumerate()
                        .all(|(pos, (&s, &i))| {
                            let (lo, hi) = oracle_allowed(pos + 1, l);
                            s == i.div_ceil(2) && (lo..=hi).contains(&s)
                        });
                let same = e == want_event
                    && paths.len() == want_paths.len()
                    && paths.iter().zip(want_paths).all(|(x, y)| x.same_memory(y));
                if mismatch.is_none() && !(parents_ok && same) {
                    mismatch = Some(e.to_string());
                }
                step += 1;
            })
            .map_err(|e| format!("reduced frame {f}: {e}"))?;
        if let Some(event) = mismatch {
            return Err(format!("frame {f}: memories differ at {event}"));
        }
        ensure!(
            step == expected.len(),
            "frame {f}: {step} vs {} events",
            expected.len()
        );
        ensure!(
            a.decoded == b.decoded && a.metric.to_bits() == b.metric.to_bits(),
            "frame {f} output"
        );
        events += step as u64;
    }
    Ok(format!(
        "10000 decodes, {events} pruning steps, 0 routing violations"
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sim.cfg");
    std::fs::write(
        &config,
        "n = 256\nk = 128\nlist_size = 8\npruner = proposed\nsnr_points_db = 1.0, 2.0, 3.0\n\
         max_frames = 3000\nmin_frame_errors = 50\nseed = 2024\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let out = dir.path().join(format!("fer-{threads}.csv"));
        let status = scllab()
            .env("SCLLAB_THREADS", threads)
            .arg("simulate")
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        ensure!(
            status.success(),
            "simulate with {threads} threads: {status}"
        );
        outputs.push(std::fs::read(&out).unwrap());
    }
    ensure!(
        outputs[0] == outputs[1],
        "CSV differs between 1 and 8 threads"
    );
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    ensure!(text.lines().count() == 4, "unexpected CSV:\n{text}");
    // The early stop must have fired somewhere for the test to mean much.
    ensure!(
        text.lines()
            .skip(1)
            .any(|l| l.split(',').nth(2) == Some("50")),
        "no early stop:\n{text}"
    );
    Ok(format!("{} identical bytes", text.len()))
}
