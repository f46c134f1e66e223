use lrcoh::curves::{self, LambdaModule, Verdict};
use lrcoh::derlie::{OneCochain, Surface, GENERATOR_NAMES, PAIRS};
use lrcoh::exactmath::{fmt_scalar, int, Scalar};
use lrcoh::milnor;
use lrcoh::modconn::{self, ConnError, Connection, PresentedModule};
use lrcoh::polyring::WeightedRing;
use lrcoh::rincomplex::{self, CohomologyTable};

use crate::problem::{InputError, Problem};
use crate::report::{CurveInfo, Report, RingInfo, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Cohomology,
    Derivations,
    Invariants,
    ConnectionFind,
    ConnectionCheck,
    ConnectionCurvature,
    ConnectionClass,
    ConnectionEquiv,
    Curve,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Cohomology,
        Command::Derivations,
        Command::Invariants,
        Command::ConnectionFind,
        Command::ConnectionCheck,
        Command::ConnectionCurvature,
        Command::ConnectionClass,
        Command::ConnectionEquiv,
        Command::Curve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Cohomology => "cohomology",
            Command::Derivations => "derivations",
            Command::Invariants => "invariants",
            Command::ConnectionFind => "connection find",
            Command::ConnectionCheck => "connection check",
            Command::ConnectionCurvature => "connection curvature",
            Command::ConnectionClass => "connection class",
            Command::ConnectionEquiv => "connection equiv",
            Command::Curve => "curve",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        let words: Vec<&str> = name.split_whitespace().collect();
        Command::ALL.into_iter().find(|c| c.name().split(' ').eq(words.iter().copied()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Flags {
    pub json: bool,
    pub window: Option<(i64, i64)>,
}

const COHOMOLOGY: &str = "for f weighted-homogeneous with an isolated singularity, H0 = Q, H1 and H2 sit in degree 0 \
with dimension dim R_(d-d1-d2-d3), and H^i = 0 for i >= 3";
const COMPLEX: &str = "the cochain maps form a complex: d1 d0 = 0 on every homogeneous r in the window";
const FACTORIZATION: &str = "the Koszul data of an isolated quasi-homogeneous surface: phi psi = psi phi = f I, \
g_i ^ g_j is a multiple of Delta, and [E, D_i] = (deg D_i / d) D_i";
const MU_TAU: &str = "for an isolated quasi-homogeneous singularity, mu = tau and dim H2 - dim H1 = mu - tau";
const CONNECTION: &str = "nabla descends to M = coker(d0) and is R-linear on the relations of Der(R)";
const CORRECTED: &str = "if the scalar curvature is d1(tau), then nabla - tau is integrable";
const EQUIV: &str = "the scalar difference of two integrable connections is a 1-cocycle";
const CURVE: &str = "for R = k[Gamma] and M = k[Lambda], connections exist exactly as the size of S dictates, \
any connection is integrable, and H^i = 0 for i >= 1";

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn ring_info(ring: &WeightedRing) -> RingInfo {
    RingInfo {
        variables: ring.names().to_vec(),
        weights: ring.weights().to_vec(),
        f: ring.format(ring.f()),
        degree: ring.degree(),
    }
}

fn conn_err(e: ConnError) -> InputError {
    InputError(e.to_string())
}

fn window(problem: &Problem, flags: Flags, s: &Surface) -> (i64, i64) {
    flags
        .window
        .or(problem.file.options.window.map(|[a, b]| (a, b)))
        .unwrap_or_else(|| rincomplex::default_window(s))
}

fn represent_cochain(report: &mut Report, ring: &WeightedRing, label: &str, xi: &OneCochain) {
    for (name, v) in GENERATOR_NAMES.iter().zip(&xi.values) {
        report.represent(label, format!("at {name}"), ring.format(v));
    }
}

fn represent_connection(report: &mut Report, ring: &WeightedRing, label: &str, c: &Connection) {
    for (name, m) in GENERATOR_NAMES.iter().zip(&c.a) {
        for (i, row) in m.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                report.represent(format!("{label} A_{name}"), format!("[{i}][{j}]"), ring.format(&ring.reduce(p)));
            }
        }
    }
}

pub fn build(cmd: Command, problem: &Problem, flags: Flags) -> Result<Report, InputError> {
    let mut report = Report::new(cmd.name());
    match cmd {
        Command::Curve => curve(&mut report, problem)?,
        _ => {
            let s = problem.surface()?;
            report.ring = Some(ring_info(s.ring()));
            match cmd {
                Command::Cohomology => cohomology(&mut report, problem, flags, &s),
                Command::Derivations => derivations(&mut report, &s),
                Command::Invariants => invariants(&mut report, problem, flags, &s),
                _ => {
                    let m = problem.module(s.ring())?;
                    connection(&mut report, cmd, problem, &s, &m)?
                }
            }
        }
    }
    Ok(report)
}

fn cohomology_tables(report: &mut Report, s: &Surface, table: &CohomologyTable) {
    let mut t = Table::new("cohomology by degree", &["w", "C0", "C1", "C2", "rk d0", "rk d1", "H0", "H1", "H2"]);
    for r in &table.records {
        t.row(
            [r.degree as usize, r.c0, r.c1, r.c2, r.rank_d0, r.rank_d1, r.h0, r.h1, r.h2]
                .iter()
                .enumerate()
                .map(|(k, v)| if k == 0 { r.degree.to_string() } else { v.to_string() })
                .collect(),
        );
    }
    report.tables.push(t);
    let (h0, h1, h2) = table.totals();
    report.tables.push(Table::summary(vec![
        ("window", format!("{}..{}", table.window.0, table.window.1)),
        ("deg Delta", s.delta_degree().to_string()),
        ("dim H0", h0.to_string()),
        ("dim H1", h1.to_string()),
        ("dim H2", h2.to_string()),
        ("support", format!("{:?}", table.support())),
    ]));
}

fn cohomology(report: &mut Report, problem: &Problem, flags: Flags, s: &Surface) {
    let ring = s.ring();
    let w = window(problem, flags, s);
    let table = rincomplex::cohomology_table(s, w);
    cohomology_tables(report, s, &table);
    report.checks(COHOMOLOGY, rincomplex::verify_theorem_c(s, &table));
    report.assert(COMPLEX, "d1 d0 = 0", rincomplex::complex_property_holds(s, w), format!("window {}..{}", w.0, w.1));
    let bad: Vec<i64> = table.records.iter().filter(|r| !r.euler_characteristic_holds()).map(|r| r.degree).collect();
    report.assert(COMPLEX, "C0 - C1 + C2 = H0 - H1 + H2 in every degree", bad.is_empty(), format!("{bad:?}"));
    for (k, (xi, combo)) in table.h1_representatives.iter().enumerate() {
        let label = format!("H1_0 #{}", k + 1);
        let terms: Vec<String> =
            combo.iter().map(|(i, m)| format!("({})*psi{}", ring.format(m), i + 1)).collect();
        report.represent(&label, "as", terms.join(" + "));
        represent_cochain(report, ring, &label, xi);
    }
    for (k, p) in table.h2_representatives.iter().enumerate() {
        report.represent(format!("H2_0 #{}", k + 1), "at Delta", ring.format(p));
    }
}

fn derivations(report: &mut Report, s: &Surface) {
    let ring = s.ring();
    let d = ring.degree();
    let gd = s.generator_degrees();
    let vars = ring.names();
    let mut cols = vec!["generator".to_string(), "degree".to_string()];
    cols.extend(vars.iter().map(|v| format!("d/d{v}")));
    let mut t = Table { title: "generators".into(), columns: cols, rows: Vec::new() };
    for (k, g) in s.generators().iter().enumerate() {
        let mut row = vec![GENERATOR_NAMES[k].to_string(), gd[k].to_string()];
        row.extend(g.coeffs.iter().map(|c| ring.format(c)));
        t.row(row);
    }
    report.tables.push(t);
    let mut b = Table::new("brackets [g_i, g_j] = sum r_k g_k", &["pair", "r_E", "r_D1", "r_D2", "r_D3"]);
    for (i, j) in PAIRS {
        let r = s.bracket_coefficients(i, j);
        let mut row = vec![format!("[{}, {}]", GENERATOR_NAMES[i], GENERATOR_NAMES[j])];
        row.extend(r.iter().map(|p| ring.format(p)));
        b.row(row);
    }
    report.tables.push(b);
    for (title, m) in [("phi", s.phi()), ("psi", s.psi())] {
        let mut t = Table::new(title, &["row", "1", "2", "3", "4"]);
        for (i, row) in m.iter().enumerate() {
            let mut cells = vec![(i + 1).to_string()];
            cells.extend(row.iter().map(|p| ring.format(p)));
            t.row(cells);
        }
        report.tables.push(t);
    }
    let mut w = Table::new("g_i ^ g_j = r Delta", &["pair", "r"]);
    for (i, j) in PAIRS {
        w.row(vec![format!("{} ^ {}", GENERATOR_NAMES[i], GENERATOR_NAMES[j]), ring.format(&s.wedge_scalar(i, j))]);
    }
    report.tables.push(w);
    report.tables.push(Table::summary(vec![
        ("deg Delta", s.delta_degree().to_string()),
        ("psi row degrees", format!("{:?}", s.psi_degrees())),
    ]));
    report.assert(FACTORIZATION, "phi psi = psi phi = f I", s.factorization_holds(), "");
    report.assert(FACTORIZATION, "sum_i phi_ic g_i = 0 for every column c", s.relation_columns_hold(), "");
    for (i, j) in PAIRS {
        report.assert(
            FACTORIZATION,
            format!("{} ^ {} = r Delta", GENERATOR_NAMES[i], GENERATOR_NAMES[j]),
            s.wedge_identity_holds(i, j),
            "",
        );
    }
    for i in 1..4 {
        let r = s.bracket_coefficients(0, i);
        let expected = Scalar::new(gd[i].into(), d.into());
        let ok = (0..4).all(|k| if k == i { r[k] == ring.constant(expected.clone()) } else { r[k].is_zero() });
        report.assert(
            FACTORIZATION,
            format!("[E, {}] = {} {}", GENERATOR_NAMES[i], fmt_scalar(&expected), GENERATOR_NAMES[i]),
            ok,
            "",
        );
    }
}

fn invariants(report: &mut Report, problem: &Problem, flags: Flags, s: &Surface) {
    let ring = s.ring();
    let jd = milnor::JacobianData::new(ring);
    match (milnor::milnor_series(ring), milnor::tjurina_number(ring)) {
        (Ok(series), Ok(tau)) => {
            let mut t = Table::new("Milnor algebra P/(f1, f2, f3) by degree", &["w", "dim"]);
            for (w, n) in &series {
                t.row(vec![w.to_string(), n.to_string()]);
            }
            report.tables.push(t);
            let mu: usize = series.iter().map(|(_, n)| n).sum();
            let table = rincomplex::cohomology_table(s, window(problem, flags, s));
            let (h0, h1, h2) = table.totals();
            report.tables.push(Table::summary(vec![
                ("mu", mu.to_string()),
                ("tau", tau.to_string()),
                ("socle bound", jd.socle_bound.to_string()),
                ("dim H0", h0.to_string()),
                ("dim H1", h1.to_string()),
                ("dim H2", h2.to_string()),
            ]));
            report.assert(MU_TAU, "isolated singularity", true, format!("P/J vanishes past degree {}", jd.socle_bound));
            report.checks(MU_TAU, milnor::verify_mu_tau_cohomology(ring, &table));
        }
        (Err(e), _) | (_, Err(e)) => report.assert(MU_TAU, "isolated singularity", false, e.to_string()),
    }
}

fn connection(
    report: &mut Report,
    cmd: Command,
    problem: &Problem,
    s: &Surface,
    m: &PresentedModule,
) -> Result<(), InputError> {
    let ring = s.ring();
    let convention = ("convention", "matrices act on column vectors; E = sum (d_i/d) x_i d/dx_i".to_string());
    let lambda = |c: &Connection| modconn::euler_scalar(s, m, c).map_or("-".into(), |l| fmt_scalar(&l));
    match cmd {
        Command::ConnectionFind => match modconn::find_connection(s, m) {
            Ok(c) => {
                report.checks(CONNECTION, modconn::check_connection(s, m, &c).map_err(conn_err)?);
                let integrable = modconn::curvature(s, m, &c).map_err(conn_err)?.integrable();
                report.tables.push(Table::summary(vec![
                    convention,
                    ("connection", "found".into()),
                    ("lambda", lambda(&c)),
                    ("integrable", yes_no(integrable)),
                ]));
                represent_connection(report, ring, "nabla", &c);
            }
            Err(ConnError::NoConnection) => {
                report.tables.push(Table::summary(vec![("connection", "none".into())]));
            }
            Err(e) => return Err(conn_err(e)),
        },
        Command::ConnectionCheck => {
            let c = problem.connection(ring, false)?;
            report.checks(CONNECTION, modconn::check_connection(s, m, &c).map_err(conn_err)?);
            report.tables.push(Table::summary(vec![
                convention,
                ("homogeneous", yes_no(modconn::is_homogeneous(s, m, &c))),
                ("lambda", lambda(&c)),
            ]));
            represent_connection(report, ring, "nabla", &c);
        }
        Command::ConnectionCurvature => {
            let c = problem.connection(ring, false)?;
            report.checks(CONNECTION, modconn::check_connection(s, m, &c).map_err(conn_err)?);
            let rec = modconn::curvature(s, m, &c).map_err(conn_err)?;
            let mut t = Table::new("curvature K(g_i, g_j) modulo im d0", &["pair", "shift", "vanishes"]);
            for pc in &rec.pairs {
                let name = format!("K({}, {})", GENERATOR_NAMES[pc.pair.0], GENERATOR_NAMES[pc.pair.1]);
                if pc.shifts.is_empty() {
                    t.row(vec![name.clone(), "-".into(), "yes".into()]);
                }
                for sh in &pc.shifts {
                    t.row(vec![name.clone(), sh.shift.to_string(), yes_no(sh.vanishes)]);
                }
                let kappa = pc.scalar.as_ref().map_or("not scalar".into(), |p| ring.format(p));
                report.represent("kappa", name, kappa);
            }
            report.tables.push(t);
            report.tables.push(Table::summary(vec![
                convention,
                ("integrable", if rec.integrable() { "integrable" } else { "not integrable" }.into()),
            ]));
        }
        Command::ConnectionClass => {
            let c = problem.connection(ring, false)?;
            report.checks(CONNECTION, modconn::check_connection(s, m, &c).map_err(conn_err)?);
            let ic = modconn::integrability_class(s, m, &c).map_err(conn_err)?;
            report.tables.push(Table::summary(vec![
                convention,
                ("class vanishes", yes_no(ic.vanishes)),
                ("gauge dropped in degrees", format!("{:?}", ic.gauge_dropped)),
            ]));
            if ic.vanishes {
                report.assert(CORRECTED, "nabla - tau is integrable", ic.corrected_integrable, "");
                for (k, tau) in ic.witness.iter().enumerate() {
                    represent_cochain(report, ring, &format!("tau #{} (degree {})", k + 1, tau.degree), tau);
                }
                if let Some(corr) = &ic.corrected {
                    represent_connection(report, ring, "nabla - tau", corr);
                }
            }
        }
        Command::ConnectionEquiv => {
            let c1 = problem.connection(ring, false)?;
            let c2 = problem.connection(ring, true)?;
            report.checks(CONNECTION, modconn::check_connection(s, m, &c1).map_err(conn_err)?);
            report.checks(CONNECTION, modconn::check_connection(s, m, &c2).map_err(conn_err)?);
            match modconn::equivalent(s, m, &c1, &c2) {
                Ok(e) => {
                    report.assert(EQUIV, "tau is a cocycle", true, "");
                    report.tables.push(Table::summary(vec![convention, ("equivalent", yes_no(e.equivalent))]));
                    for (name, v) in GENERATOR_NAMES.iter().zip(&e.difference) {
                        report.represent("tau", format!("at {name}"), ring.format(v));
                    }
                    if let Some(g) = &e.gauge {
                        report.represent("phi with d0(phi) = tau", "", ring.format(g));
                    }
                }
                Err(ConnError::NotCocycle) => {
                    report.assert(EQUIV, "tau is a cocycle", false, "one of the connections is not integrable");
                }
                Err(e) => return Err(conn_err(e)),
            }
        }
        _ => unreachable!("not a connection command"),
    }
    Ok(())
}

fn curve(report: &mut Report, problem: &Problem) -> Result<(), InputError> {
    let sec = problem.file.curve.as_ref().expect("checked by the caller");
    let sg = curves::analyze_semigroup(&sec.generators).map_err(|e| InputError(format!("[curve]: {e}")))?;
    let m = LambdaModule::new(sg, &sec.lambda_complement).map_err(|e| InputError(format!("[curve]: {e}")))?;
    let verdict = curves::classify_connections(&m);
    let given = problem.curve_c()?;
    let c = match (&verdict, &given) {
        (_, Some(c)) => Some(c.clone()),
        (Verdict::Unique(l0), None) => Some(int(*l0 as i64)),
        (Verdict::AllScalars, None) => Some(int(0)),
        (Verdict::None, None) => None,
    };
    report.curve = Some(CurveInfo {
        generators: m.semigroup.generators.clone(),
        lambda_complement: m.complement.clone(),
        c: c.as_ref().map(fmt_scalar),
    });
    let bound = problem.file.options.degree_bound.unwrap_or_else(|| m.default_bound(c.as_ref().unwrap_or(&int(1))));
    let oracle = curves::brute_force_connection_search(&m, bound);
    let list = |v: &[u64]| format!("{{{}}}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
    report.tables.push(Table::summary(vec![
        ("gaps", list(&m.semigroup.gaps)),
        ("frobenius", m.semigroup.frobenius.to_string()),
        ("Gamma^(1)", list(&m.semigroup.gamma1)),
        ("derivation degrees", list(&m.semigroup.derivation_degrees())),
        ("S", list(&m.s)),
        ("l", m.l().to_string()),
        ("verdict", verdict.to_string()),
        ("oracle verdict", oracle.to_string()),
        ("degree bound", bound.to_string()),
    ]));
    report.assert(CURVE, "trichotomy agrees with the search oracle", oracle == verdict, format!("bound {bound}"));
    let Some(c) = c else { return Ok(()) };
    if !curves::admits(&m, &c) {
        report.assert(CURVE, "c is admissible", false, format!("c = {} but the verdict is {verdict}", fmt_scalar(&c)));
        return Ok(());
    }
    let mut act = Table::new("action of nabla_E = E - c", &["generator", "t^lambda maps to"]);
    for w in m.semigroup.derivation_degrees() {
        let g = if w == 0 { "E".to_string() } else { format!("t^{w} E") };
        act.row(vec![g, format!("(lambda - {}) t^(lambda + {w})", fmt_scalar(&c))]);
    }
    report.tables.push(act);
    report.assert(CURVE, "curvature vanishes on every generator pair", curves::curvature_vanishes(&m, &c, bound), "");
    let rows = curves::curve_cohomology(&m, &c, bound).map_err(|e| InputError(e.to_string()))?;
    let mut t = Table::new("cohomology by degree", &["lambda", "C0", "C1", "rk d0", "H0", "H1"]);
    for r in &rows {
        t.row([r.degree as usize, r.c0, r.c1, r.rank_d0, r.h0, r.h1].iter().map(|v| v.to_string()).collect());
    }
    report.tables.push(t);
    let bad: Vec<u64> = rows.iter().filter(|r| r.h1 > 0).map(|r| r.degree).collect();
    report.assert(
        CURVE,
        format!("H1_lambda = 0 for lambda <= {bound}"),
        bad.is_empty(),
        if bad.is_empty() { String::new() } else { format!("H1 is nonzero in degrees {bad:?}") },
    );
    Ok(())
}
