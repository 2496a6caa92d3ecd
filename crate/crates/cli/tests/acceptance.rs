//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p poptrack-cli --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use poptrack::controllers::SteerInput;
use poptrack::prelude::*;
use poptrack::sim::{compare_with_logs, write_run_csv};
use poptrack_cli::commands::{bench_scenario, bundled_benchmark};
use poptrack_cli::scenario::LoadedScenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT: f64 = 1.22;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- fixtures

fn random_path(rng: &mut ChaCha8Rng, resolution: f64) -> Path {
    let mut pts = vec![Waypoint::new(
        rng.gen_range(-50.0..50.0),
        rng.gen_range(-50.0..50.0),
    )];
    let mut h: f64 = rng.gen_range(-PI..PI);
    for _ in 0..rng.gen_range(2..6) {
        h += rng.gen_range(-0.6..0.6);
        let len = rng.gen_range(1.0..6.0);
        let last = *pts.last().unwrap();
        pts.push(Waypoint::new(
            last.x + len * h.cos(),
            last.y + len * h.sin(),
        ));
    }
    densify_path(&Path::new(pts).unwrap(), resolution).unwrap()
}

fn random_state_near(rng: &mut ChaCha8Rng, path: &Path) -> VehicleState {
    let w = path.waypoints()[rng.gen_range(0..path.len() / 3 + 1)];
    VehicleState::new(
        w.x + rng.gen_range(-2.0..2.0),
        w.y + rng.gen_range(-2.0..2.0),
        rng.gen_range(-PI..PI),
        rng.gen_range(0.5..40.0),
    )
}

fn steer_input<'a>(state: &'a VehicleState, path: &'a Path) -> SteerInput<'a> {
    let progress = closest_index(state.position(), path, None);
    SteerInput {
        state,
        path,
        dt: 0.05,
        steering_limit: LIMIT,
        wheelbase: 2.89,
        progress,
        window: SearchWindow::new(progress, path.index_span(20.0)),
    }
}

// ---------------------------------------------------------------- criteria

fn controller_ordering() -> Outcome {
    let started = Instant::now();
    let loaded = match LoadedScenario::from_path(&bundled_benchmark()) {
        Ok(l) => l,
        Err(e) => return outcome(false, e.to_string()),
    };
    let scenarios = loaded.scenarios(true).expect("bundled scenario is valid");
    let sparse = scenarios[0].track.resolve().unwrap();
    let dense = densify_path(&sparse, scenarios[0].densify_resolution).unwrap();
    let (cmp, _) = compare_with_logs(&scenarios, &dense, 4).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let err = |name: &str| cmp.row(name).unwrap().metrics.mean_abs_crosstrack;
    let pop = err("pop");
    let best_baseline = ["pid", "pure_pursuit", "stanley"]
        .iter()
        .map(|n| err(n))
        .fold(f64::INFINITY, f64::min);
    let ratio = pop / best_baseline;
    let track_ok = sparse.total_length() >= 1000.0
        && sparse.max_spacing() <= 1.0 + 1e-9
        && dense.max_spacing() <= 0.01 + 1e-9;
    let pass = cmp.ranking[0] == "pop" && ratio <= 0.6 && elapsed < 60.0 && track_ok;
    outcome(
        pass,
        format!(
            "ranking {:?}; pop {:.4} m, stanley {:.4}, pure_pursuit {:.4}, pid {:.4}; ratio {:.3} (<= 0.6); track {:.0} m; {:.1} s",
            cmp.ranking,
            pop,
            err("stanley"),
            err("pure_pursuit"),
            err("pid"),
            ratio,
            sparse.total_length(),
            elapsed
        ),
    )
}

/// Exhaustive search written without reference to the controller's code.
fn exhaustive_pop(cfg: &PopConfig, prev: f64, state: &VehicleState, path: &Path) -> f64 {
    let wps = path.waypoints();
    let mut nearest = 0;
    let mut nearest_d = f64::INFINITY;
    for (i, w) in wps.iter().enumerate() {
        let d = (w.x - state.x).powi(2) + (w.y - state.y).powi(2);
        if d < nearest_d {
            nearest_d = d;
            nearest = i;
        }
    }
    let ld = cfg.ld_min + cfg.kv * state.v;
    let target = wps[nearest..]
        .iter()
        .find(|w| {
            (((w.x - state.x).powi(2) + (w.y - state.y).powi(2)).sqrt() - ld).abs()
                <= path.epsilon()
        })
        .copied()
        .unwrap_or(wps[wps.len() - 1]);
    let candidates = build_candidates(prev, cfg.nbd, cfg.resolution, LIMIT);
    let dist = |delta: f64| {
        let step = state.v * cfg.predict_dt;
        let px = state.x + step * (state.theta + delta).cos();
        let py = state.y + step * (state.theta + delta).sin();
        ((target.x - px).powi(2) + (target.y - py).powi(2)).sqrt()
    };
    let mut best = 0;
    for k in 1..candidates.len() {
        if dist(candidates[k]) < dist(candidates[best]) {
            best = k;
        }
    }
    candidates[best]
}

fn pop_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let path = random_path(&mut rng, 0.01);
        let state = random_state_near(&mut rng, &path);
        let cfg = PopConfig {
            resolution: [3, 5, 11, 21, 41][rng.gen_range(0..5)],
            nbd: rng.gen_range(0.5..10.0f64).to_radians(),
            ..Default::default()
        };
        let prev = rng.gen_range(-LIMIT..LIMIT);
        let mut st = PopState {
            prev_steering: prev,
            search_start: 0,
        };
        if pop_step(&cfg, &mut st, &state, &path, LIMIT, None)
            != exhaustive_pop(&cfg, prev, &state, &path)
        {
            mismatches += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && elapsed < 5.0,
        format!("1000 instances, {mismatches} mismatches, {elapsed:.2} s"),
    )
}

fn latency_bound() -> Outcome {
    let loaded = LoadedScenario::from_path(&bundled_benchmark()).unwrap();
    let (report, _) = bench_scenario(&loaded, 3).unwrap();
    let pop = report
        .entries
        .iter()
        .find(|e| e.controller == "pop")
        .unwrap();
    let mean_ms = pop.mean_us / 1000.0;
    outcome(
        mean_ms < 3.239,
        format!(
            "mean {:.4} ms, p50 {:.4} ms, p99 {:.4} ms over {} steps (< 3.239 ms)",
            mean_ms,
            pop.p50_us / 1000.0,
            pop.p99_us / 1000.0,
            pop.samples
        ),
    )
}

fn longitudinal_points() -> Outcome {
    let cfg = LongitudinalConfig::default();
    let checks = [
        (longitudinal_step(&cfg, 0.0, 0.0), 1.0),
        (longitudinal_step(&cfg, cfg.v_lim, 0.0), 0.5),
        (longitudinal_step(&cfg, cfg.v_lim, cfg.delta_lim), 0.0),
    ];
    let worst = checks
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    outcome(
        worst <= 1e-12,
        format!(
            "tau = {}, {}, {}; worst error {worst:e}",
            checks[0].0, checks[1].0, checks[2].0
        ),
    )
}

/// Least-squares circle center for `x^2 + y^2 = 2a x + 2b y + c`.
fn circle_center(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x / n, sy + y / n));
    // centered coordinates keep the normal equations well conditioned
    let (mut suu, mut suv, mut svv, mut suuu, mut svvv, mut suvv, mut svuu) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (u, v) = (x - mx, y - my);
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    let r1 = 0.5 * (suuu + suvv);
    let r2 = 0.5 * (svvv + svuu);
    let det = suu * svv - suv * suv;
    let uc = (r1 * svv - r2 * suv) / det;
    let vc = (r2 * suu - r1 * suv) / det;
    (mx + uc, my + vc)
}

fn turning_radius() -> Outcome {
    let params = PlantParams::default();
    let dt = 0.005;
    let mut worst: f64 = 0.0;
    for &delta in &[0.05, 0.2, 0.5, 1.0, -0.3, -1.2] {
        for &v in &[2.0, 10.0, 25.0] {
            let radius = params.wheelbase / f64::tan(delta).abs();
            let omega = v / params.wheelbase * f64::tan(delta).abs();
            let steps = (TAU / (omega * dt)).ceil() as usize;
            let cmd = ControlCommand {
                steering: delta,
                throttle: 0.0,
            };
            let mut s = VehicleState::new(-4.0, 7.0, 1.1, v);
            let mut pts = vec![(s.x, s.y)];
            for _ in 0..steps {
                s = plant_step(&s, cmd, dt, &params);
                pts.push((s.x, s.y));
            }
            let (cx, cy) = circle_center(&pts);
            for &(x, y) in &pts {
                let r = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
                worst = worst.max((r - radius).abs() / radius);
            }
        }
    }
    outcome(
        worst < 1e-3,
        format!(
            "max radial deviation {:.2e} (< 1e-3) over 18 delta/speed pairs",
            worst
        ),
    )
}

fn invariant_suites() -> Vec<(String, Outcome)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();

    // clipping
    let cases = 500;
    let mut failures = 0;
    for _ in 0..cases {
        let path = random_path(&mut rng, 0.05);
        let mut state = random_state_near(&mut rng, &path);
        state.theta += rng.gen_range(-6.0..6.0);
        for cfg in LateralConfig::defaults() {
            let mut c = LateralController::new(&cfg);
            for _ in 0..3 {
                if c.steer(&steer_input(&state, &path)).abs() > LIMIT {
                    failures += 1;
                }
            }
        }
    }
    out.push(("steering clipping".into(), suite(cases, failures)));

    // proximal containment
    let mut failures = 0;
    for _ in 0..cases {
        let path = random_path(&mut rng, 0.05);
        let state = random_state_near(&mut rng, &path);
        let cfg = PopConfig {
            nbd: rng.gen_range(0.5..10.0f64).to_radians(),
            ..Default::default()
        };
        let prev = rng.gen_range(-LIMIT..LIMIT);
        let mut st = PopState {
            prev_steering: prev,
            search_start: 0,
        };
        let d = pop_step(&cfg, &mut st, &state, &path, LIMIT, None);
        if d < prev - cfg.nbd - 1e-12 || d > prev + cfg.nbd + 1e-12 || d.abs() > LIMIT {
            failures += 1;
        }
    }
    out.push(("POP proximal containment".into(), suite(cases, failures)));

    // PID FIFO at buffer length 500
    let cases = 200;
    let mut failures = 0;
    for _ in 0..cases {
        let cfg = PidConfig::default();
        let mut st = PidState::new(cfg.buffer_len);
        let n: usize = rng.gen_range(1..1500);
        let pushed: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        for &e in &pushed {
            pid_step(&cfg, &mut st, e, 0.05, LIMIT);
        }
        let kept: Vec<f64> = st.buffer().collect();
        let expected = &pushed[n.saturating_sub(500)..];
        if st.capacity() != 500 || kept != expected {
            failures += 1;
        }
    }
    out.push(("PID FIFO capacity/eviction".into(), suite(cases, failures)));

    // mirror symmetry
    let cases = 300;
    let mut failures = 0;
    for _ in 0..cases {
        let path = random_path(&mut rng, 0.05);
        let state = random_state_near(&mut rng, &path);
        let mpath = Path::with_params(
            path.waypoints()
                .iter()
                .map(|w| Waypoint::new(w.x, -w.y))
                .collect(),
            Some(path.resolution()),
            path.epsilon(),
        )
        .unwrap();
        let mstate = VehicleState::new(state.x, -state.y, -state.theta, state.v);
        let prev = rng.gen_range(-LIMIT..LIMIT);
        let pop = PopConfig::default();
        let mut a = PopState {
            prev_steering: prev,
            search_start: 0,
        };
        let mut b = PopState {
            prev_steering: -prev,
            search_start: 0,
        };
        if pop_step(&pop, &mut b, &mstate, &mpath, LIMIT, None)
            != -pop_step(&pop, &mut a, &state, &path, LIMIT, None)
        {
            failures += 1;
        }
        for cfg in [
            LateralConfig::PurePursuit(PurePursuitConfig::default()),
            LateralConfig::Stanley(StanleyConfig::default()),
        ] {
            let d = LateralController::new(&cfg).steer(&steer_input(&state, &path));
            let m = LateralController::new(&cfg).steer(&steer_input(&mstate, &mpath));
            if m != -d {
                failures += 1;
            }
        }
    }
    out.push((
        "mirror symmetry (PP/Stanley/POP)".into(),
        suite(cases, failures),
    ));

    // heading wrap
    let cases = 1000;
    let mut failures = 0;
    for _ in 0..cases {
        let path = random_path(&mut rng, 0.05);
        let mut state = random_state_near(&mut rng, &path);
        state.theta = rng.gen_range(-10.0 * PI..10.0 * PI);
        let e = compute_errors(&state, &path, Reference::RearAxle);
        if !(e.heading > -PI && e.heading <= PI) {
            failures += 1;
        }
    }
    out.push(("heading-error wrapping".into(), suite(cases, failures)));

    // deterministic replay
    let cases = 200;
    let mut failures = 0;
    for i in 0..cases {
        let track = TrackSpec::Chicane {
            length: 60.0,
            offset: rng.gen_range(0.5..3.0),
            bend_radius: rng.gen_range(10.0..30.0),
        };
        let mut s = Scenario::new(
            poptrack::sim::TrackSource::Generated {
                spec: track,
                spacing: 1.0,
            },
            LateralConfig::defaults()[i % 4].clone(),
        );
        s.spawn = VehicleState::new(
            0.0,
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-0.3..0.3),
            rng.gen_range(0.0..10.0),
        );
        s.stop.max_steps = 150;
        s.record_latency = false;
        let bytes = || {
            let log = run_scenario(&s).unwrap();
            let mut buf = Vec::new();
            write_run_csv(&mut buf, &log).unwrap();
            (log, buf)
        };
        let (a, ab) = bytes();
        let (b, bb) = bytes();
        if a != b || ab != bb {
            failures += 1;
        }
    }
    out.push(("deterministic replay".into(), suite(cases, failures)));
    out
}

fn suite(cases: usize, failures: usize) -> Outcome {
    outcome(
        cases >= 200 && failures == 0,
        format!("{cases} cases, {failures} failures"),
    )
}

fn lookahead_fallback() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = 1000;
    let mut hits = 0;
    for _ in 0..cases {
        let path = random_path(&mut rng, 0.01);
        let pos = Waypoint::new(
            path.waypoints()[0].x + rng.gen_range(-20.0..20.0),
            path.waypoints()[0].y + rng.gen_range(-20.0..20.0),
        );
        let start = rng.gen_range(0..path.len());
        let farthest = path
            .waypoints()
            .iter()
            .map(|w| euclidean_distance(pos, *w))
            .fold(0.0, f64::max);
        let ld = farthest + 2.0 * path.epsilon() + rng.gen_range(0.0..100.0);
        if lookahead_index(pos, &path, ld, start) == path.len() - 1 {
            hits += 1;
        }
    }
    outcome(
        hits == cases,
        format!("{hits}/{cases} out-of-range queries returned len-1"),
    )
}

fn main() {
    let mut results: Vec<(String, Outcome)> = vec![
        ("controller ordering".into(), controller_ordering()),
        ("POP oracle equivalence".into(), pop_oracle()),
        ("POP latency bound".into(), latency_bound()),
        ("longitudinal point checks".into(), longitudinal_points()),
        ("plant turning radius".into(), turning_radius()),
    ];
    for (name, o) in invariant_suites() {
        results.push((format!("invariants: {name}"), o));
    }
    results.push(("lookahead fallback".into(), lookahead_fallback()));

    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag}  {name}: {}", o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
