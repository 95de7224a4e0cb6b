//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::Instant;

use extcalc::differential::FdMode;
use extcalc::verify::{run_suite, Bound, Suite, SuiteConfig, VerificationReport};

struct Criterion {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    /// Record `id` must exist, be error-free and meet `tol` on its own metric.
    fn at_most(&mut self, report: &VerificationReport, id: &str, tol: f64) {
        match report.checks.iter().find(|c| c.id == id) {
            None => self.failures.push(format!("{id} missing")),
            Some(c) => {
                let m = c.measured();
                if c.error.is_some() || !(m <= tol) || c.bound != Bound::AtMost {
                    self.failures.push(format!("{id} = {m:.3e} > {tol:.0e}"));
                } else {
                    self.notes.push(format!("{id} {m:.1e}"));
                }
            }
        }
    }

    fn at_least(&mut self, report: &VerificationReport, id: &str, floor: f64) {
        match report.checks.iter().find(|c| c.id == id) {
            None => self.failures.push(format!("{id} missing")),
            Some(c) => {
                let m = c.measured();
                if c.error.is_some() || !(m >= floor) {
                    self.failures.push(format!("{id} = {m:.3e} < {floor:.0e}"));
                } else {
                    self.notes.push(format!("{id} {m:.1e}"));
                }
            }
        }
    }

    fn require(&mut self, ok: bool, what: String) {
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn report(self, n: usize, title: &str) -> bool {
        let pass = self.failures.is_empty();
        let detail = if pass { self.notes.join("; ") } else { self.failures.join("; ") };
        println!("{} criterion {n:>2}: {title} [{detail}]", if pass { "PASS" } else { "FAIL" });
        pass
    }
}

fn suite(suite: Suite, geometry: Option<&str>, fd: FdMode) -> VerificationReport {
    let config = SuiteConfig { suite, geometry: geometry.map(String::from), fd, ..Default::default() };
    run_suite(&config).expect("suite runs")
}

fn algebra() -> bool {
    let mut c = Criterion::new();
    let start = Instant::now();
    let r = suite(Suite::TensorAlgebra, None, FdMode::Fd2);
    let elapsed = start.elapsed().as_secs_f64();
    for id in ["insertion_commutation", "contraction_associativity", "bigcirc_associativity", "frobenius_projection"] {
        c.at_most(&r, &format!("tensor-algebra.{id}"), 1e-12);
    }
    c.require(elapsed < 5.0, format!("{elapsed:.2} s"));
    c.report(1, "algebra identities on 1000 random tensors, <= 1e-12, < 5 s")
}

fn projection() -> bool {
    let mut c = Criterion::new();
    let r = suite(Suite::Projection, None, FdMode::Fd2);
    for g in ["sphere", "torus", "circle3d", "helix_segment"] {
        c.at_most(&r, &format!("projection.{g}.brute_force"), 1e-12);
    }
    c.report(2, "recursive projection equals brute-force evaluation, <= 1e-12")
}

fn curl_example() -> bool {
    let mut c = Criterion::new();
    c.at_most(&suite(Suite::Curl, Some("plane_disk"), FdMode::Fd2), "curl.plane_disk.rotation_curl", 1e-8);
    c.at_most(&suite(Suite::Curl, Some("plane_disk"), FdMode::Analytic), "curl.plane_disk.rotation_curl", 1e-12);
    c.report(3, "curl of (-y, x, 0) on the plane equals 2 (fd2 1e-8, analytic 1e-12)")
}

fn stokes() -> bool {
    let mut c = Criterion::new();
    let r = suite(Suite::Stokes, None, FdMode::Fd2);
    c.at_most(&r, "stokes.hemisphere.ez_boundary", 1e-6);
    c.at_most(&r, "stokes.hemisphere.ez_curvature", 1e-6);
    c.at_most(&r, "stokes.hemisphere.ez_total", 1e-6);
    c.at_most(&r, "stokes.helix_segment.path_ftc", 1e-6);
    c.at_most(&r, "stokes.plane_disk.circulation", 1e-6);
    c.report(4, "hemisphere e_z terms -2pi and +2pi, helix FTC, disk circulation")
}

fn curvature() -> bool {
    let mut c = Criterion::new();
    for (fd, tol) in [(FdMode::Fd2, 1e-5), (FdMode::Analytic, 1e-9)] {
        let r = suite(Suite::DifferentialIdentities, None, fd);
        c.at_most(&r, "differential.sphere.mean_curvature", tol);
        c.at_most(&r, "differential.circle3d.mean_curvature", tol);
    }
    c.report(5, "mean curvature on spheres R in {1, 2} and the codim-2 circle")
}

fn laplacians() -> bool {
    let mut c = Criterion::new();
    let r = suite(Suite::Laplacian, None, FdMode::Fd2);
    c.at_most(&r, "laplacian.sphere.coordinates", 1e-4);
    c.at_most(&r, "laplacian.sphere.rotation_field", 1e-3);
    c.at_most(&r, "laplacian.sphere.weak_form", 1e-4);
    c.report(6, "extrinsic and covariant Laplacians, manufactured weak form")
}

fn euler() -> bool {
    let mut c = Criterion::new();
    let r = suite(Suite::Euler, None, FdMode::Fd2);
    c.at_most(&r, "euler.sphere.momentum", 1e-5);
    c.at_most(&r, "euler.sphere.incompressibility", 1e-5);
    c.at_most(&r, "euler.sphere.extrinsic_momentum", 1e-8);
    c.at_most(&r, "euler.sphere.force_balance", 1e-6);
    c.at_most(&r, "euler.hemisphere.force_balance", 1e-6);
    c.at_most(&r, "euler.sphere.divergence_form", 1e-5);
    c.report(7, "rigid rotation is a steady Euler flow with balanced forces")
}

fn stress() -> bool {
    let mut c = Criterion::new();
    let r = suite(Suite::Stress, None, FdMode::Fd2);
    c.at_most(&r, "stress.hemisphere.generator_identity", 1e-5);
    c.at_most(&r, "stress.hemisphere.torque_equivalence", 1e-5);
    c.at_least(&r, "stress.sphere.contrapositive_pairing", 1e-6);
    c.at_least(&r, "stress.sphere.contrapositive_nonzero", 1e-6);
    c.at_most(&r, "stress.sphere.contrapositive_normal", 1e-8);
    c.at_most(&r, "stress.sphere.constrained_family", 1e-10);
    c.report(8, "stress generator and torque identities, equilibrium contrapositive")
}

fn evolving() -> bool {
    let mut c = Criterion::new();
    let r = suite(Suite::Evolving, None, FdMode::Fd2);
    c.at_most(&r, "evolving.expanding_sphere.area_rate", 1e-6);
    for g in ["expanding_sphere", "rotating_plane"] {
        c.at_most(&r, &format!("evolving.{g}.commutators"), 1e-4);
        c.at_most(&r, &format!("evolving.{g}.projector_rate"), 1e-6);
    }
    c.at_most(&r, "evolving.expanding_sphere.dirichlet_rate_rank0", 1e-4);
    c.at_most(&r, "evolving.expanding_sphere.dirichlet_rate_rank2", 1e-3);
    c.report(9, "Reynolds area rate, commutators, projector rate, Dirichlet energy rate")
}

fn full_run() -> bool {
    let mut c = Criterion::new();
    let out = std::env::temp_dir().join(format!("extcalc-acceptance-{}.json", std::process::id()));
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_extcalc"))
        .args(["verify", "--suite", "all", "--out"])
        .arg(&out)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed().as_secs_f64();
    c.require(status.status.code() == Some(0), format!("exit {:?}", status.status.code()));
    c.require(elapsed < 120.0, format!("{elapsed:.1} s single-threaded"));
    c.require(out.exists(), "report written".into());
    let _ = std::fs::remove_file(&out);
    c.report(10, "verify --suite all exits 0 in under 2 minutes")
}

fn main() {
    let results = [
        algebra(),
        projection(),
        curl_example(),
        stokes(),
        curvature(),
        laplacians(),
        euler(),
        stress(),
        evolving(),
        full_run(),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
