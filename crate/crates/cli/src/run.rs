//! Executes a parsed command against the library.

use serde_json::json;
use torus_spectra::correlations::{
    n_correlation_oracle, pair_correlation, triple_correlation, CorrelationStat, Interval,
};
use torus_spectra::diophantine::{
    continuous_volume_estimate, dyadic_count, prop4_exact, prop4_histogram, trivial_bound, DyadicBox, Prop4Params,
};
use torus_spectra::gaps::{
    gap_correlation_inequalities, gap_profile, long_gap_proportion, lower_bound_witness, pointwise_check,
};
use torus_spectra::measure::{averaged_triple, hyp_measure, ShapeRectangle};
use torus_spectra::poisson_seq::{
    first_n, generate, generate_random_only, pair_corr_decomposition, theoretical_limit, LimitComponent, Tag,
};
use torus_spectra::solver::{endgame_integrals, solve_g};
use torus_spectra::spectrum::enumerate_with;
use torus_spectra::{Desymmetrization, Result, TorusShape};

use crate::args::*;
use crate::report::{Cell, Report};

fn shape(alpha: &Alpha) -> Result<TorusShape> {
    let [a, b, c] = alpha.0;
    TorusShape::new(a, b, c)
}

fn desym(quadrant: bool) -> Desymmetrization {
    if quadrant {
        Desymmetrization::Quadrant
    } else {
        Desymmetrization::HalfPlane
    }
}

fn interval(p: &Pair) -> Interval {
    Interval::new(p.0[0], p.0[1])
}

/// The first `n` values of the requested sequence.
fn sequence(src: &Source, n: usize) -> Result<Vec<f64>> {
    Ok(match src.sequence {
        SequenceKind::Torus => enumerate_with(&shape(&src.alpha)?, n, desym(src.quadrant))?.values().to_vec(),
        SequenceKind::SemiRandom => first_n(n, src.seed, true).values().to_vec(),
        SequenceKind::RandomOnly => first_n(n, src.seed, false).values().to_vec(),
    })
}

fn stat_report(s: &CorrelationStat) -> Report {
    let mut fields: Vec<(&'static str, Cell)> = vec![("order", s.order.into())];
    let names = [("i1_lo", "i1_hi"), ("i2_lo", "i2_hi")];
    for (iv, (lo, hi)) in s.intervals.iter().zip(names) {
        fields.push((lo, iv.lo.into()));
        fields.push((hi, iv.hi.into()));
    }
    fields.extend([
        ("n", s.sample_size.into()),
        ("count", s.count.into()),
        ("value", s.value.into()),
        ("method", format!("{:?}", s.method).to_lowercase().into()),
    ]);
    Report::new(s).row(fields)
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Spectrum(a) => {
            let s = enumerate_with(&shape(&a.alpha)?, a.count, desym(a.quadrant))?;
            let rows = s
                .values()
                .iter()
                .zip(s.points())
                .enumerate()
                .map(|(i, (&v, &(m, n)))| vec![i.into(), v.into(), m.into(), n.into()])
                .collect();
            let result = json!({ "count": s.count(), "values": s.values(), "points": s.points() });
            Ok(Report::new(&result).table(vec!["index", "value", "m", "n"], rows))
        }
        Command::Paircorr(a) => {
            let v = sequence(&a.source, a.n)?;
            let i = interval(&a.i1);
            let s = if a.oracle { n_correlation_oracle(&v, &[i], a.n)? } else { pair_correlation(&v, i, a.n)? };
            Ok(stat_report(&s))
        }
        Command::Triplecorr(a) => {
            let v = sequence(&a.source, a.n)?;
            let (i1, i2) = (interval(&a.i1), interval(&a.i2));
            let s =
                if a.oracle { n_correlation_oracle(&v, &[i1, i2], a.n)? } else { triple_correlation(&v, i1, i2, a.n)? };
            Ok(stat_report(&s))
        }
        Command::Gaps(a) => {
            // One extra value so the witness can use the gap after index N.
            let v = sequence(&a.source, a.n + 1)?;
            let g = match a.g {
                Some(g) => g,
                None => solve_g(1e-12)?.g,
            };
            let p = gap_profile(&v, a.n)?;
            let pointwise = pointwise_check(&v, a.n, a.b)?;
            let ineq = gap_correlation_inequalities(&v, a.n, a.b, g, a.eps)?;
            let long = long_gap_proportion(&v, a.n, g, a.eps)?;
            let witness = lower_bound_witness(&v, a.n)?;
            let result = json!({
                "n": a.n,
                "max_gap": p.max_gap(),
                "mean_gap": p.mean_gap(),
                "ecdf_b": p.ecdf(a.b),
                "long_gap_proportion": long,
                "pointwise": pointwise,
                "inequalities": ineq,
                "consistent": ineq.consistent(),
                "lower_bound": witness,
            });
            Ok(Report::new(&result).row(vec![
                ("n", a.n.into()),
                ("b", a.b.into()),
                ("g", g.into()),
                ("eps", a.eps.into()),
                ("max_gap", p.max_gap().into()),
                ("mean_gap", p.mean_gap().into()),
                ("ecdf_b", p.ecdf(a.b).into()),
                ("long_gap_proportion", long.into()),
                ("t2", ineq.t2.into()),
                ("t3", ineq.t3.into()),
                ("first_rhs", ineq.first_rhs.into()),
                ("second_rhs", ineq.second_rhs.into()),
                ("third_rhs", ineq.third_rhs.into()),
                ("consistent", ineq.consistent().into()),
                ("pointwise_max_window", pointwise.max_window.into()),
                ("pointwise_violations", (pointwise.first_violations + pointwise.second_violations).into()),
                ("lower_bound", witness.lower_bound.into()),
            ]))
        }
        Command::Construct(a) => {
            let s = if a.random_only { generate_random_only(a.n, a.seed) } else { generate(a.n, a.seed) };
            let rows = s
                .values()
                .iter()
                .zip(s.tags())
                .map(|(&v, t)| match *t {
                    Tag::Random { i } => vec![v.into(), "random".into(), i.into(), "".into()],
                    Tag::Cluster { m, j } => vec![v.into(), "cluster".into(), m.into(), j.into()],
                })
                .collect();
            let result = json!({
                "seed": s.seed(),
                "len": s.len(),
                "cluster_points": s.cluster_point_count(),
                "max_gap": s.max_gap(),
                "values": s.values(),
                "tags": s.tags(),
            });
            Ok(Report::new(&result).table(vec!["value", "tag_kind", "tag_index_1", "tag_index_2"], rows))
        }
        Command::Decompose(a) => {
            let s = first_n(a.n, a.seed, true);
            let d = pair_corr_decomposition(&s, a.b, a.n)?;
            let (lim_r, lim_f) =
                (theoretical_limit(a.b, LimitComponent::RandomOnly), theoretical_limit(a.b, LimitComponent::Full));
            let result = json!({ "decomposition": d, "t2": d.t2(), "limit_random_only": lim_r, "limit_full": lim_f });
            Ok(Report::new(&result).row(vec![
                ("n", a.n.into()),
                ("b", a.b.into()),
                ("s1", d.s1.into()),
                ("s2", d.s2.into()),
                ("s3", d.s3.into()),
                ("s4", d.s4.into()),
                ("total", d.total.into()),
                ("t2", d.t2().into()),
                ("limit_random_only", lim_r.into()),
                ("limit_full", lim_f.into()),
            ]))
        }
        Command::DiophCount(a) => {
            let bx = DyadicBox::new(a.a.0, a.b.0, a.d.into());
            let count = dyadic_count(&bx, a.m, a.c_eps)?;
            let bound = trivial_bound(&bx);
            let result = json!({ "box": bx, "count": count, "p0": bx.p0(), "trivial_bound": bound });
            Ok(Report::new(&result).row(vec![
                ("m", a.m.into()),
                ("a", a.a.to_string().replace(',', " ").into()),
                ("b", a.b.to_string().replace(',', " ").into()),
                ("d", a.d.into()),
                ("count", count.into()),
                ("p0", bx.p0().into()),
                ("trivial_bound", bound.into()),
            ]))
        }
        Command::Prop4Sum(a) => {
            let params = Prop4Params::new(a.m, a.delta, a.eps_prime);
            let exact = if a.exact { Some(prop4_exact(params)?.to_string()) } else { None };
            let h = prop4_histogram(params)?;
            let sum = h.weighted_sum();
            let scaled = sum / (a.m * a.m) as f64;
            let result = json!({
                "params": params,
                "delta_cap": params.delta_cap(),
                "tuples": h.tuples(),
                "sum": sum,
                "sum_over_m2": scaled,
                "exact": exact,
            });
            Ok(Report::new(&result).row(vec![
                ("m", a.m.into()),
                ("delta", a.delta.into()),
                ("eps_prime", a.eps_prime.into()),
                ("tuples", h.tuples().into()),
                ("sum", sum.into()),
                ("sum_over_m2", scaled.into()),
                ("exact", exact.unwrap_or_default().into()),
            ]))
        }
        Command::Volume(a) => {
            let v = continuous_volume_estimate(a.m, a.delta, a.eps_prime, a.c_eps, a.samples, a.seed, None)?;
            Ok(Report::new(&v).row(vec![
                ("m", v.m.into()),
                ("delta", v.delta.into()),
                ("eps_prime", v.eps_prime.into()),
                ("samples", v.samples.into()),
                ("seed", v.seed.into()),
                ("hits", v.hits.into()),
                ("estimate", v.estimate.into()),
                ("std_error", v.std_error.into()),
            ]))
        }
        Command::Measure(a) => {
            let r = rectangle(&a.rect)?;
            let mu = hyp_measure(&r, a.tol)?;
            let result = json!({ "rectangle": r, "mu_hyp": mu, "volume": r.volume() });
            Ok(Report::new(&result).row(vec![("mu_hyp", mu.into()), ("volume", r.volume().into())]))
        }
        Command::AvgTriple(a) => {
            let r = rectangle(&a.rect)?;
            let t = averaged_triple(&r, interval(&a.i1), interval(&a.i2), a.n, a.samples, a.seed)?;
            let result = json!({
                "mu_hyp": t.mu_hyp,
                "estimate": t.estimate,
                "std_error": t.std_error,
                "target": t.target,
                "relative_error": t.relative_error(),
                "within_3se": t.target_within(3.0),
                "n": t.n,
                "samples": t.n_samples,
                "seed": t.seed,
            });
            Ok(Report::new(&result).row(vec![
                ("n", t.n.into()),
                ("samples", t.n_samples.into()),
                ("mu_hyp", t.mu_hyp.into()),
                ("estimate", t.estimate.into()),
                ("std_error", t.std_error.into()),
                ("target", t.target.into()),
                ("relative_error", t.relative_error().into()),
            ]))
        }
        Command::SolveG(a) => {
            let g = solve_g(a.tol)?;
            Ok(Report::new(&g).row(vec![
                ("G", g.g.into()),
                ("C", g.c.into()),
                ("residual", g.residual.into()),
                ("used_fallback", g.used_fallback.into()),
            ]))
        }
        Command::Endgame(a) => {
            let g = match a.g {
                Some(g) => g,
                None => solve_g(1e-12)?.g,
            };
            let e = endgame_integrals(g, a.eps)?;
            let result = json!({ "G": g, "eps": a.eps, "endgame": e, "contradiction": e.rhs > g });
            Ok(Report::new(&result).row(vec![
                ("G", g.into()),
                ("eps", a.eps.into()),
                ("first", e.first.into()),
                ("second", e.second.into()),
                ("third", e.third.into()),
                ("rhs", e.rhs.into()),
                ("slack", e.slack.into()),
                ("coefficient", e.coefficient.into()),
                ("discrepancy", e.discrepancy.into()),
            ]))
        }
    }
}

fn rectangle(r: &Rect) -> Result<ShapeRectangle> {
    ShapeRectangle::new(r.0.map(|[lo, hi]| (lo, hi)))
}
