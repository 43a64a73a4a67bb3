//! One function per subcommand; each validates its inputs and returns a
//! report.

use anyhow::{anyhow, bail, Context, Result};
use bianchi_core::cocycles::{coboundary_residual, h_jet, sigma_matrix, trace_sigma_h1, SeriesOptions};
use bianchi_core::cusps::{cusp_classes, eis_dims, fixed_cusps, level_warnings, Involution};
use bianchi_core::cycles::{eisenstein_cycle, omega_eval, FaceOptions};
use bianchi_core::field::{factorize, make_field, Field, Mat2O, OElt, SplittingType};
use bianchi_core::h3::Point3;
use bianchi_core::lattice::{Lattice, Precision};
use bianchi_core::traces::{
    index_gamma_prime, index_oracle, is_orbifold, lefschetz_gamma1, lefschetz_pn, rohlfs_ab, trace_sigma_h2,
    LefschetzInput, Q,
};
use bianchi_core::Error;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cache::{Cache, CuspSummary, Key, Kind, Lookup};
use crate::report::{complex, rational, Method, Report};

/// Validated job parameters shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Job {
    pub command: &'static str,
    pub field: Field,
    pub n: Option<i64>,
    pub k: u32,
    pub rho: Involution,
    pub prec: Precision,
    pub face: FaceOptions,
    pub cache: Option<Cache>,
    pub extra: Value,
}

impl Job {
    pub fn inputs(&self) -> Value {
        let rho = match self.rho {
            Involution::Identity => "identity",
            Involution::Sigma => "sigma",
            Involution::Tau => "tau",
        };
        let mut v = json!({
            "command": self.command,
            "d": self.field.d,
            "N": self.n,
            "k": self.k,
            "rho": rho,
            "eps": self.prec.eps,
            "t_floor": self.face.t_floor,
        });
        if let (Value::Object(m), Value::Object(extra)) = (&mut v, &self.extra) {
            m.extend(extra.clone());
        }
        v
    }

    fn level(&self) -> Result<i64> {
        self.n.ok_or_else(|| anyhow!(Error::InvalidInput(format!("{} needs --N", self.command))))
    }

    fn series(&self) -> SeriesOptions {
        SeriesOptions { prec: self.prec, ..Default::default() }
    }

    /// The lattice O with G₂(0) taken from the cache when available.
    fn lattice(&self) -> Result<Lattice> {
        let l = Lattice::from_field(&self.field);
        let Some(cache) = &self.cache else { return Ok(l) };
        let key = Key { kind: Kind::LatticeG2, d: self.field.d, n: 0 };
        match cache.get(&key) {
            Lookup::Hit(p) if p.len() == 16 => {
                let re = f64::from_le_bytes(p[..8].try_into().expect("16 bytes"));
                let im = f64::from_le_bytes(p[8..].try_into().expect("16 bytes"));
                l.seed_g2_0(Complex64::new(re, im));
            }
            lookup => {
                if let Lookup::Rejected(why) = lookup {
                    eprintln!("cache: recomputing G2(0) for d = {}: {why}", self.field.d);
                }
                let g = l.g2_0();
                let mut p = g.re.to_le_bytes().to_vec();
                p.extend_from_slice(&g.im.to_le_bytes());
                cache.put(&key, &p)?;
            }
        }
        Ok(l)
    }
}

fn orbifold_warning(r: &mut Report, n: i64) {
    if is_orbifold(n) {
        r.warn(format!("N = {n}: Gamma1(N) may have torsion; values are orbifold quantities"));
    }
}

fn elt_str(x: OElt) -> String {
    x.to_string()
}

/// The first columns of the cusp class representatives and fixed counts,
/// from the cache or by enumeration.
fn cusp_summary(job: &Job, n: i64) -> Result<CuspSummary> {
    let key = Key { kind: Kind::Cusps, d: job.field.d, n };
    if let Some(cache) = &job.cache {
        match cache.get(&key) {
            Lookup::Hit(p) => match CuspSummary::from_bytes(&p) {
                Ok(s) => return Ok(s),
                Err(why) => eprintln!("cache: recomputing cusps: {why}"),
            },
            Lookup::Rejected(why) => eprintln!("cache: recomputing cusps: {why}"),
            Lookup::Miss => {}
        }
    }
    let table = cusp_classes(&job.field, n)?;
    let reps = table
        .classes
        .iter()
        .map(|c| {
            let (a, cc) = (c.rep.a, c.rep.c);
            [a.a, a.b, cc.a, cc.b]
        })
        .collect();
    let s = CuspSummary {
        count: table.count() as u64,
        sigma_fixed: fixed_cusps(&table.classes, Involution::Sigma) as u64,
        tau_fixed: fixed_cusps(&table.classes, Involution::Tau) as u64,
        reps,
    };
    if let Some(cache) = &job.cache {
        cache.put(&key, &s.to_bytes())?;
    }
    Ok(s)
}

pub fn cusps(job: &Job) -> Result<Report> {
    let n = job.level()?;
    let s = cusp_summary(job, n)?;
    let mut r = Report::new(job.inputs(), Method::Enumeration);
    let classes: Vec<Value> = s
        .reps
        .iter()
        .map(|q| {
            json!({
                "a": elt_str(OElt::new(q[0] as i64, q[1] as i64)),
                "c": elt_str(OElt::new(q[2] as i64, q[3] as i64)),
            })
        })
        .collect();
    r.set("value", s.count)
        .set("count", s.count)
        .set("sigma_fixed", s.sigma_fixed)
        .set("tau_fixed", s.tau_fixed)
        .set("classes", classes);
    let f = factorize(n);
    if f.len() == 1 && f[0].1 == 1 && n > 2 && job.field.splitting_type(n)? == SplittingType::Inert {
        r.cross_check(n * n - 1, s.count as i64 == n * n - 1);
    }
    for w in level_warnings(n) {
        r.warn(w);
    }
    Ok(r)
}

pub fn dims(job: &Job) -> Result<Report> {
    let n = job.level()?;
    let d = eis_dims(&job.field, n, job.k)?;
    let mut r = Report::new(job.inputs(), Method::Enumeration);
    r.set("value", json!({ "h0": d.dim0, "h1": d.dim1, "h2": d.dim2 }));
    if d.cokernel_corrected {
        r.warn("k = 0: constants restrict nontrivially; H2 is corrected by a one-dimensional cokernel");
    }
    orbifold_warning(&mut r, n);
    Ok(r)
}

pub fn trace_h1(job: &Job) -> Result<Report> {
    let n = job.level()?;
    let t = trace_sigma_h1(&job.field, n)?;
    let mut r = Report::new(job.inputs(), Method::Enumeration);
    r.set("value", rational(t.value))
        .set("cusp_count", t.cusp_count)
        .set("basis_dim", t.basis_dim)
        .cross_check(rational(t.formula_value), t.agrees);
    if t.basis_dim != t.cusp_count {
        r.warn(format!(
            "cocycle basis has {} elements but there are {} cusps; the trace is taken on the basis",
            t.basis_dim, t.cusp_count
        ));
    }
    orbifold_warning(&mut r, n);
    Ok(r)
}

pub fn trace_h2(job: &Job) -> Result<Report> {
    let n = job.level()?;
    let t = trace_sigma_h2(&job.field, n, job.k, job.rho)?;
    let mut r = Report::new(job.inputs(), Method::Enumeration);
    r.set("value", t.value.to_string())
        .set("fixed_cusps", t.fixed_cusps)
        .set("delta", t.delta)
        .set("alpha", t.alpha)
        .cross_check(rational(t.formula_value), t.agrees);
    orbifold_warning(&mut r, n);
    Ok(r)
}

pub fn lefschetz(job: &Job) -> Result<Report> {
    let n = job.level()?;
    let input = LefschetzInput::new(&job.field, n, job.k)?;
    let l = lefschetz_gamma1(&input)?;
    let ab = rohlfs_ab(&input)?;
    let mut r = Report::new(job.inputs(), Method::ClosedForm);
    r.set("value", rational(l))
        .set("rohlfs", json!({ "A": rational(ab.a), "B": rational(ab.b), "t": input.t, "s": input.s, "j2": input.j2 }));
    if let [(p, e)] = input.factors[..] {
        if p != 2 && job.field.disc % p != 0 {
            let c = lefschetz_pn(job.field.d, p, e, job.k, input.t)?;
            r.cross_check(rational(c), c == l);
        }
    }
    if !l.is_integer() {
        r.warn("non-integral value: Gamma1(N) has torsion");
    }
    orbifold_warning(&mut r, n);
    Ok(r)
}

pub fn index_oracle_cmd(job: &Job) -> Result<Report> {
    let n = job.level()?;
    let v = index_oracle(n)?;
    let closed = index_gamma_prime(n)?;
    let mut r = Report::new(job.inputs(), Method::Enumeration);
    r.set("value", rational(v)).cross_check(closed.to_string(), v == Q::from_integer(closed));
    Ok(r)
}

fn no_h_warning(r: &mut Report, field: &Field) {
    if matches!(field.d, 1 | 3) {
        r.warn("the unit group forces H = 0 identically for this field");
    }
}

fn jet_values(field: &Field, l: &Lattice, u: Point3, opts: &SeriesOptions) -> Result<[Complex64; 4]> {
    let j = h_jet(field, l, u, opts)?;
    Ok([j.h, j.dz, j.dzbar, j.dt])
}

pub fn cocycle_eval(job: &Job, u: Point3) -> Result<Report> {
    let l = job.lattice()?;
    let opts = job.series();
    let base = jet_values(&job.field, &l, u, &opts)?;
    // error estimate: the change from widening the Bessel cutoff by 25%
    let wide = jet_values(&job.field, &l, u, &SeriesOptions { cutoff_scale: 1.25, ..opts })?;
    let err = base.iter().zip(&wide).map(|(a, b)| (a - b).norm()).fold(job.prec.eps, f64::max);
    let w = omega_eval(&job.field, &l, u, &opts)?;
    let mut r = Report::new(job.inputs(), Method::Numeric);
    r.set("value", complex(base[0], err))
        .set("derivatives", json!({ "dz": complex(base[1], err), "dzbar": complex(base[2], err), "dt": complex(base[3], err) }))
        .set("omega", Value::Array(w.f.iter().map(|c| complex(*c, err)).collect()))
        .set("g2_0", complex(l.g2_0(), job.prec.eps))
        .set("error_estimate", err);
    no_h_warning(&mut r, &job.field);
    Ok(r)
}

/// Parses "a+bw" (also "a+bi" over Q(i)) into a + bω.
pub fn parse_elt(s: &str) -> Result<OElt> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || anyhow!(Error::InvalidInput(format!("cannot parse ring element {s:?}")));
    let Some(body) = s.strip_suffix('w').or_else(|| s.strip_suffix('i')) else {
        return Ok(OElt::int(s.parse().map_err(|_| bad())?));
    };
    // split before the sign that starts the ω term
    let cut = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').last().map(|(i, _)| i);
    let (a, b) = match cut {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let coef = match b {
        "" | "+" => 1,
        "-" => -1,
        b => b.parse().map_err(|_| bad())?,
    };
    Ok(OElt::new(a.parse().map_err(|_| bad())?, coef))
}

pub fn parse_matrix(field: &Field, s: &str) -> Result<Mat2O> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c, d] = parts[..] else {
        bail!(Error::InvalidInput(format!("matrix needs four comma-separated entries, got {s:?}")));
    };
    let m = Mat2O::new(parse_elt(a)?, parse_elt(b)?, parse_elt(c)?, parse_elt(d)?);
    if m.det(field) != OElt::ONE {
        bail!(Error::DetNotOne);
    }
    Ok(m)
}

fn default_samples() -> Vec<(Mat2O, Point3)> {
    let w = OElt::OMEGA;
    let p = |x, y, t| Point3 { z: Complex64::new(x, y), t };
    vec![
        (Mat2O::from_ints(0, -1, 1, 0), p(0.2, 0.1, 0.9)),
        (Mat2O::from_ints(1, 0, 1, 1), p(0.3, -0.2, 1.1)),
        (Mat2O::new(OElt::ONE, OElt::ZERO, w, OElt::ONE), p(-0.1, 0.4, 0.8)),
        (Mat2O::from_ints(2, 1, 3, 2), p(0.4, 0.1, 0.9)),
        (Mat2O::new(OElt::ONE, w, OElt::ZERO, OElt::ONE), p(0.1, 0.2, 0.7)),
    ]
}

pub fn coboundary_check(job: &Job, sample: Option<(Mat2O, Point3)>, tol: f64) -> Result<Report> {
    let l = job.lattice()?;
    let opts = job.series();
    let samples = sample.map_or_else(default_samples, |s| vec![s]);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (m, u) in samples {
        let res = coboundary_residual(&job.field, &l, &m, u, &opts)?;
        worst = worst.max(res);
        rows.push(json!({
            "matrix": m.to_string(),
            "point": { "x": u.z.re, "y": u.z.im, "t": u.t },
            "residual": res,
        }));
    }
    let mut r = Report::new(job.inputs(), Method::Numeric);
    r.set("value", worst).set("samples", rows).set("error_estimate", worst).set("tolerance", tol);
    no_h_warning(&mut r, &job.field);
    if !(worst <= tol) {
        r.set("error", json!({ "kind": "tolerance", "message": format!("residual {worst:e} exceeds {tol:e}") }));
    }
    Ok(r)
}

pub fn sigma_matrix_cmd(job: &Job, entries: bool) -> Result<Report> {
    let n = job.level()?;
    let s = sigma_matrix(&job.field, n)?;
    let mut r = Report::new(job.inputs(), Method::Enumeration);
    let trace = s.trace();
    r.set("value", trace.map_or(Value::Null, rational))
        .set("dim", s.dim())
        .set("den", s.den)
        .set("order", s.order)
        .set("squares_to_identity", s.squares_to_identity())
        .set("psi00_consistent", s.psi00_consistent());
    if entries {
        let rows: Vec<Value> = (0..s.dim())
            .map(|i| {
                (0..s.dim())
                    .map(|j| match s.entry_rational(i, j) {
                        Some(q) => rational(q),
                        None => json!({ "numerator": s.entry_reduced(i, j), "den": s.den }),
                    })
                    .collect()
            })
            .collect();
        r.set("entries", rows);
    }
    if trace.is_none() {
        r.warn("trace is not rational");
    }
    orbifold_warning(&mut r, n);
    Ok(r)
}

pub fn cycle(job: &Job, xi: usize) -> Result<Report> {
    let n = job.level()?;
    if job.field.d != 1 {
        bail!(Error::InvalidInput("the Eisenstein cycle is implemented for d = 1 (Z[i]) only".into()));
    }
    let c = eisenstein_cycle(n, xi, &job.series(), &job.face).context("Eisenstein cycle")?;
    let mut spread: f64 = 0.0;
    let values: Vec<Value> = c
        .entries
        .iter()
        .map(|e| {
            spread = spread.max(e.spread);
            json!({
                "g": e.rep.g.to_string(),
                "eta": [e.eta.0, e.eta.1],
                "value": complex(e.value, e.spread),
            })
        })
        .collect();
    let mut r = Report::new(job.inputs(), Method::Numeric);
    r.set("values", values)
        .set("cusp", c.cusp)
        .set("scaling", c.scaling.to_string())
        .set("error_estimate", spread);
    no_h_warning(&mut r, &job.field);
    Ok(r)
}

pub fn field(d: i64) -> Result<Field> {
    Ok(make_field(d)?)
}
