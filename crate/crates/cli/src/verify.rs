//! Self-checks runnable from the command line.

use anyhow::Result;
use clap::ValueEnum;
use toric_severi::coeffs::{q_beta_oracle, CoeffContext};
use toric_severi::orderings::BetaSeq;
use toric_severi::polygon::{noether_defect, rectangle, triangle, HTPolygon};
use toric_severi::series::{check_g_identity, gyz_check, GyzSample};
use toric_severi::severi::{report, Method};
use toric_severi::{rat, ratio};

use crate::template_rows;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Table1,
    Coeffs,
    Gyz,
    Oracle,
    Toric,
    All,
}

pub struct Finding {
    pub suite: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Finding {
    fn new(suite: &'static str) -> Self {
        Finding { suite, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

const TABLE1_TSV: [&str; 9] = [
    "{0->1:2}\t1\t1\t4\t0\t0\t(2)\t(1)\t1\t0\t0\t-1",
    "{0->2:1}\t1\t2\t1\t1\t1\t(1,1)\t(1,1)\t2\t1\t0\t0",
    "{0->1:3}\t2\t1\t9\t0\t0\t(3)\t(2)\t1\t0\t0\t-2",
    "{0->1:2, 0->1:2}\t2\t1\t16\t0\t0\t(4)\t(2)\t-3/2\t0\t0\t5/2",
    "{0->1:2, 0->2:1}\t2\t2\t4\t0\t1\t(3,1)\t(2,1)\t-3\t-1\t0\t2",
    "{0->2:1, 0->2:1}\t2\t2\t1\t1\t1\t(2,2)\t(2,2)\t-3\t-3/2\t0\t1",
    "{0->2:1, 1->2:2}\t2\t2\t4\t1\t0\t(1,3)\t(1,2)\t-3\t-2\t0\t2",
    "{0->2:1, 1->3:1}\t2\t3\t1\t1\t1\t(1,2,1)\t(1,2,1)\t-3\t-3\t-1\t0",
    "{0->3:1}\t2\t3\t1\t1\t1\t(1,1,1)\t(1,1,1)\t3\t3\t1\t0",
];

fn table1(ctx: &CoeffContext) -> Result<Finding> {
    let mut f = Finding::new("table1");
    let mut rows: Vec<String> = Vec::new();
    for delta in 1..=2 {
        rows.extend(template_rows(ctx, delta)?.iter().map(|r| r.tsv()));
    }
    rows.sort();
    let mut expected: Vec<String> = TABLE1_TSV.iter().map(|s| s.to_string()).collect();
    expected.sort();
    f.check(rows.len() == expected.len(), || format!("{} rows", rows.len()));
    for want in &expected {
        f.check(rows.contains(want), || format!("missing row {want:?}"));
    }
    Ok(f)
}

fn coeffs(ctx: &CoeffContext, order: usize) -> Result<Finding> {
    let mut f = Finding::new("coeffs");
    let t1 = ctx.table(1)?;
    let t2 = ctx.table(2)?;
    f.check(
        [&t1.a, &t1.l, &t1.d, &t1.c, &t1.h, &t1.ctilde] == [&rat(3), &rat(-2), &rat(0), &rat(4), &rat(0), &rat(0)],
        || format!("delta 1 table {t1:?}"),
    );
    f.check(
        [&t2.a, &t2.l, &t2.d, &t2.c, &t2.h, &t2.ctilde]
            == [&rat(-21), &ratio(39, 2), &rat(4), &rat(-38), &rat(0), &rat(-36)],
        || format!("delta 2 table {t2:?}"),
    );
    f.check(t2.b == vec![ratio(-9, 2), rat(1)], || format!("b(2, -) = {:?}", t2.b));
    for delta in 1..=order {
        let s = ctx.template_sums(delta)?;
        f.check(s.h == rat(0), || format!("H({delta}) = {}", s.h));
        f.check(s.l == s.l_alt, || format!("L({delta}) = {} vs {}", s.l, s.l_alt));
    }
    f.check(check_g_identity(ctx, order)?, || format!("g identity fails at order {order}"));
    for p in 1..=5u64 {
        f.check(ctx.diffq(p, 1)? == -rat(p as i64), || format!("DiffQ({p}, 1)"));
    }
    for delta in 1..=order.min(3) {
        for p in delta as u64..=6 {
            f.check(ctx.diffq(p, delta)? == ctx.diffq_closed(p, delta)?, || {
                format!("DiffQ({p}, {delta}) closed form")
            });
        }
    }
    Ok(f)
}

fn gyz(ctx: &CoeffContext, order: usize) -> Result<Finding> {
    let mut f = Finding::new("gyz");
    let mut samples = vec![
        GyzSample::from_integers(1, 0, 0, 0, 0, &[]),
        GyzSample::from_integers(0, 1, 0, 0, 0, &[]),
        GyzSample::from_integers(0, 0, 1, 0, 0, &[]),
        GyzSample::from_integers(0, 0, 0, 1, 1, &[1]),
        GyzSample::from_integers(9, -9, 9, 3, 0, &[2, 1]),
    ];
    samples.push(GyzSample {
        x: ratio(5, 2),
        y: ratio(-1, 3),
        z: ratio(7, 4),
        w: ratio(2, 5),
        s: ratio(3, 7),
        s_i: vec![ratio(-2, 3), ratio(1, 2)],
    });
    for s in &samples {
        let out = gyz_check(ctx, order, s)?;
        f.check(out.holds(), || format!("{s:?} differs at q^{:?}", out.first_mismatch));
    }
    Ok(f)
}

/// Small deterministic family of polygons.
fn polygon_family() -> Vec<HTPolygon> {
    let mut out = Vec::new();
    for m in 1..=3usize {
        let choices: Vec<Vec<i64>> = (0..5i64.pow(m as u32))
            .map(|code| (0..m).map(|i| code / 5i64.pow(i as u32) % 5 - 2).collect())
            .collect();
        for left in &choices {
            if left.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            for right in &choices {
                if right.windows(2).any(|w| w[0] < w[1]) {
                    continue;
                }
                for dt in 0..=2 {
                    if let Ok(p) = HTPolygon::new(dt, left.clone(), right.clone()) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn oracle(ctx: &CoeffContext, order: usize) -> Result<Finding> {
    let mut f = Finding::new("oracle");
    let top = order.min(3);
    for delta in 1..=top {
        for code in 0..4u64.pow(3) {
            let beta = BetaSeq::new(vec![1 + code % 4, 1 + code / 4 % 4, 1 + code / 16])?;
            f.check(ctx.q_beta_delta(&beta, delta)? == q_beta_oracle(&beta, delta), || {
                format!("Q at {beta}, delta {delta}")
            });
        }
    }
    let mut polygons: Vec<HTPolygon> = (3..=5).map(triangle).collect();
    polygons.extend([(2, 2), (3, 3), (3, 4)].map(|(a, b)| rectangle(a, b)));
    polygons.push(HTPolygon::new(2, vec![-1, -1, 1, 1], vec![0, 0, 0, 0])?);
    for p in &polygons {
        let r = report(ctx, p, top, &Method::ALL)?;
        f.check(r.agree, || format!("methods disagree on {p:?}"));
    }
    Ok(f)
}

fn toric() -> Result<Finding> {
    let mut f = Finding::new("toric");
    for p in polygon_family() {
        let inv = p.toric_invariants();
        f.check(noether_defect(&p) == rat(inv.c2tilde), || format!("Noether identity on {p:?}"));
        let weighted: i64 = inv.s_i.iter().map(|(&i, &c)| i as i64 * c as i64).sum();
        f.check(inv.c2tilde == inv.c2 as i64 + weighted, || format!("c2 identity on {p:?}"));
    }
    Ok(f)
}

pub fn run(ctx: &CoeffContext, suite: Suite, order: usize) -> Result<Vec<Finding>> {
    let suites = match suite {
        Suite::All => vec![Suite::Table1, Suite::Coeffs, Suite::Gyz, Suite::Oracle, Suite::Toric],
        s => vec![s],
    };
    suites
        .into_iter()
        .map(|s| match s {
            Suite::Table1 => table1(ctx),
            Suite::Coeffs => coeffs(ctx, order),
            Suite::Gyz => gyz(ctx, order),
            Suite::Oracle => oracle(ctx, order),
            Suite::Toric => toric(),
            Suite::All => unreachable!(),
        })
        .collect()
}
