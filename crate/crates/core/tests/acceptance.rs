//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use skein_core::bounds::{self, Verdict};
use skein_core::corpus::{default_corpus, CorpusEntry};
use skein_core::diagram::LinkDiagram;
use skein_core::homfly::{EngineOptions, HomflyEngine};
use skein_core::par::Parallelism;
use skein_core::poly::LaurentPoly2;
use skein_core::seifert;
use skein_core::verify::{parity_holds, run_verification, skein_relation_holds, VerifyOptions};

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: u32, title: &str, problems: Vec<String>, detail: String) {
        if problems.is_empty() {
            println!("PASS  {id:>2}. {title}: {detail}");
        } else {
            self.failed += 1;
            println!("FAIL  {id:>2}. {title}: {detail}");
            for p in problems.iter().take(20) {
                println!("        {p}");
            }
        }
    }
}

struct Ctx {
    corpus: Vec<CorpusEntry>,
    engine: HomflyEngine,
}

impl Ctx {
    fn p(&self, d: &LinkDiagram) -> LaurentPoly2 {
        self.engine.homfly(d).expect("corpus diagrams are within the cap")
    }

    fn get(&self, name: &str) -> &CorpusEntry {
        self.corpus.iter().find(|e| e.name() == name).unwrap_or_else(|| panic!("{name} missing"))
    }

    fn homogeneous(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.corpus.iter().filter(|e| seifert::analyze_diagram(&e.diagram).is_homogeneous)
    }

    fn knots(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.corpus.iter().filter(|e| e.diagram.component_count() == 1)
    }
}

fn engine_correctness(ctx: &Ctx, gate: &mut Gate) {
    let engine = HomflyEngine::default();
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut n = 0;
    for e in &ctx.corpus {
        let Some(want) = &e.record.homfly_ref else { continue };
        n += 1;
        match engine.homfly(&e.diagram) {
            Ok(got) if &got == want => {}
            Ok(got) => problems.push(format!("{}: got {got}, want {want}", e.name())),
            Err(err) => problems.push(format!("{}: {err}", e.name())),
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        problems.push(format!("took {elapsed:?}"));
    }
    let knots = ctx.knots().filter(|e| e.record.homfly_ref.is_some()).count();
    gate.report(
        1,
        "engine equals reference polynomials",
        problems,
        format!("{n} records ({knots} knots) exact in {:.2}s", elapsed.as_secs_f64()),
    );
}

fn skein_relation(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let mut triples = 0;
    for e in &ctx.corpus {
        for i in 0..e.diagram.crossing_count() {
            triples += 1;
            if !skein_relation_holds(&ctx.engine, &e.diagram, i).unwrap() {
                problems.push(format!("{} crossing {i}", e.name()));
            }
        }
    }
    gate.report(2, "skein relation at every crossing", problems, format!("{triples} triples"));
}

fn main_bound(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let (mut n, mut eq) = (0, 0);
    for e in ctx.homogeneous() {
        n += 1;
        match bounds::check_theorem_main(&e.diagram, &ctx.p(&e.diagram)) {
            Ok(Verdict::Equality) => eq += 1,
            Ok(Verdict::Strict) => {}
            other => problems.push(format!("{}: {other:?}", e.name())),
        }
    }
    gate.report(
        3,
        "min_deg_v <= -s+w+2s_+ +1-2#sp on homogeneous diagrams",
        problems,
        format!("{n} diagrams, {eq} equalities, 0 allowed violations"),
    );
}

fn top_monomial(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let mut n = 0;
    for e in ctx.homogeneous().filter(|e| e.diagram.connected_count() == 1) {
        n += 1;
        let d = &e.diagram;
        let p = ctx.p(d);
        let g = seifert::analyze_diagram(d);
        let st = d.stats();
        let a = g.eps_rank_sum.unwrap() as i32;
        let b = g.rank as i32;
        if p.coefficient(a, b) == 0.into() {
            problems.push(format!("{}: no v^{a} z^{b} term", e.name()));
        }
        if p.max_deg_z().unwrap() != b || g.rank != st.c as i64 - st.s as i64 + 1 {
            problems.push(format!("{}: max_deg_z {} vs rank {b}", e.name(), p.max_deg_z().unwrap()));
        }
    }
    let mut split = Vec::new();
    for name in ["3_1 U 0_1", "3_1 U 3_1"] {
        let d = &ctx.get(name).diagram;
        let p = ctx.p(d);
        let st = d.stats();
        let rhs = bounds::rhs_main(&st, st.diagram_components) as i32;
        let h = p.highest_z_term().unwrap();
        if h.coefficient(rhs) == 0.into() {
            problems.push(format!("{name}: h has no v^{rhs} term"));
        }
        split.push(format!("{name}: h[v^{rhs}] = {}", h.coefficient(rhs)));
        match bounds::check_theorem_main2(d, &p) {
            Ok((Verdict::Holds, _)) => {}
            other => problems.push(format!("{name}: {other:?}")),
        }
    }
    gate.report(
        4,
        "top monomial v^(eps rank sum) z^(rank) and split h terms",
        problems,
        format!("{n} connected homogeneous diagrams; {}", split.join("; ")),
    );
}

fn block_identity(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let mut n = 0;
    for e in ctx.homogeneous().filter(|e| e.diagram.connected_count() == 1) {
        n += 1;
        let sum = seifert::analyze_diagram(&e.diagram).eps_rank_sum().unwrap();
        let rhs = seifert::prop_key_rhs(&e.diagram).unwrap();
        if sum != rhs {
            problems.push(format!("{}: {sum} != {rhs}", e.name()));
        }
    }
    gate.report(5, "eps rank sum = -s+w+2s_+ -1", problems, format!("{n} connected homogeneous diagrams"));
}

fn signature_bound(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let (mut n, mut eq) = (0, 0);
    for e in ctx.knots().filter(|e| e.diagram.is_alternating() && e.diagram.crossing_count() > 0) {
        n += 1;
        let p = ctx.p(&e.diagram);
        let sigma = match seifert::traczyk_signature(&e.diagram) {
            Ok(s) => s,
            Err(err) => {
                problems.push(format!("{}: {err}", e.name()));
                continue;
            }
        };
        if e.record.sigma != Some(sigma) {
            problems.push(format!("{}: tree signature {sigma}, recorded {:?}", e.name(), e.record.sigma));
        }
        let lhs = p.min_deg_v().unwrap() as i64;
        match Verdict::compare(lhs, sigma) {
            Verdict::Violated => problems.push(format!("{}: {lhs} > {sigma}", e.name())),
            Verdict::Equality => eq += 1,
            _ => {}
        }
    }
    gate.report(
        6,
        "min_deg_v <= sigma on alternating knots, tree signature = recorded",
        problems,
        format!("{n} knots, {eq} equalities"),
    );
}

fn slice_bound(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let (mut n, mut positive) = (0, 0);
    for e in ctx.knots().filter(|e| e.record.chi4.is_some()) {
        let d = &e.diagram;
        if !seifert::analyze_diagram(d).is_homogeneous {
            continue;
        }
        n += 1;
        let p = ctx.p(d);
        let v = bounds::check_slice_cromwell(d, &p, e.record.chi4).unwrap();
        if v == Verdict::Violated {
            problems.push(format!("{}: violated", e.name()));
        }
        if d.is_positive() {
            positive += 1;
            if v != Verdict::Equality {
                problems.push(format!("{}: positive knot without equality", e.name()));
            }
        }
    }
    for name in ["3_1", "5_1", "7_1", "8_19"] {
        let e = ctx.get(name);
        if !e.diagram.is_positive() {
            problems.push(format!("{name}: diagram is not positive"));
        }
    }
    gate.report(
        7,
        "min_deg_v <= 1-chi4, equality on positive knots",
        problems,
        format!("{n} homogeneous knots, {positive} positive ones all equal"),
    );
}

fn six_one(ctx: &Ctx, gate: &mut Gate) {
    let e = ctx.get("6_1");
    let p = ctx.p(&e.diagram);
    let h = p.highest_z_term().unwrap();
    let mut problems = Vec::new();
    let h_min = h.min_deg().unwrap();
    let chi4 = e.record.chi4;
    if chi4 != Some(1) {
        problems.push(format!("chi4 = {chi4:?}"));
    }
    if h_min != 0 {
        problems.push(format!("min_deg_v(h) = {h_min}"));
    }
    if e.diagram.is_positive() {
        problems.push("diagram is positive".into());
    }
    if !e.diagram.is_alternating() {
        problems.push("diagram is not alternating".into());
    }
    let min = p.min_deg_v().unwrap();
    if min >= 0 {
        problems.push(format!("min_deg_v(P) = {min} attains the bound"));
    }
    gate.report(
        8,
        "6_1 attains equality at the top z coefficient only",
        problems,
        format!("h = {h}, min_deg_v(h) = {h_min} = 1 - chi4, min_deg_v(P) = {min} < 0"),
    );
}

fn structural(ctx: &Ctx, gate: &mut Gate) {
    let mut problems = Vec::new();
    let plain = HomflyEngine::new(EngineOptions { memoize: false, ..Default::default() });

    let mut mirrors = 0;
    for e in &ctx.corpus {
        let p = ctx.p(&e.diagram);
        let m = ctx.p(&e.diagram.mirror());
        mirrors += 1;
        if m != p.mirror() {
            problems.push(format!("{}: mirror", e.name()));
        }
        if e.diagram.component_count() % 2 == 1 && m != p.invert_v() {
            problems.push(format!("{}: v -> 1/v on an odd link", e.name()));
        }
        if !parity_holds(&p, e.diagram.component_count()) {
            problems.push(format!("{}: parity", e.name()));
        }
    }

    let small: Vec<&CorpusEntry> = ctx.corpus.iter().filter(|e| (1..=5).contains(&e.diagram.crossing_count())).collect();
    let mut unions = 0;
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            if a.diagram.crossing_count() + b.diagram.crossing_count() > 8 {
                continue;
            }
            unions += 1;
            let u = a.diagram.disjoint_union(&b.diagram);
            let want = &(&LaurentPoly2::delta() * &ctx.p(&a.diagram)) * &ctx.p(&b.diagram);
            if plain.homfly(&u).unwrap() != want {
                problems.push(format!("{} U {}: split union", a.name(), b.name()));
            }
        }
    }

    let mut choices = 0;
    for e in ctx.corpus.iter().filter(|e| (1..=7).contains(&e.diagram.crossing_count())) {
        let d = &e.diagram;
        let p = ctx.p(d);
        for starts in all_basepoints(d) {
            choices += 1;
            if ctx.engine.homfly_with_basepoints(d, &starts).unwrap() != p {
                problems.push(format!("{}: basepoints {starts:?}", e.name()));
            }
        }
    }
    gate.report(
        9,
        "mirror, split union, parity, basepoint invariance",
        problems,
        format!("{mirrors} mirrors, {unions} unions, {choices} basepoint choices on diagrams up to 7 crossings"),
    );
}

/// Every component order with every start arc.
fn all_basepoints(d: &LinkDiagram) -> Vec<Vec<u32>> {
    fn orders(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in orders(n - 1) {
            for at in 0..=rest.len() {
                let mut o = rest.clone();
                o.insert(at, n - 1);
                out.push(o);
            }
        }
        out
    }
    let comps = d.strand_components();
    let mut out = Vec::new();
    for order in orders(comps.len()) {
        let mut partial: Vec<Vec<u32>> = vec![vec![]];
        for &c in &order {
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    comps[c].iter().map(move |&a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

fn conjecture(ctx: &Ctx, gate: &mut Gate) {
    let summary = run_verification(&ctx.corpus, &VerifyOptions { property_checks: false, ..Default::default() });
    let rows = &summary.conjecture;
    let flagged: Vec<String> = rows.iter().filter(|r| r.flagged).map(|r| r.name.clone()).collect();
    let main_eq = rows.iter().filter(|r| r.main_equality).count();
    let slice_eq = rows.iter().filter(|r| r.slice_equality == Some(true)).count();
    let top_only = rows.iter().filter(|r| r.top_slice_equality == Some(true) && r.slice_equality == Some(false)).count();
    let mut problems: Vec<String> = flagged.iter().map(|n| format!("{n}: equality without positivity")).collect();
    problems.extend(summary.violations().into_iter().map(|(n, c)| format!("{n}: {c} violated")));
    gate.report(
        10,
        "equality-versus-positivity report",
        problems,
        format!(
            "{} homogeneous rows, {main_eq} main equalities, {slice_eq} slice equalities, all positive; \
             {top_only} top-z-only equalities; {} flags",
            rows.len(),
            flagged.len()
        ),
    );
}

fn main() -> ExitCode {
    let corpus = default_corpus().expect("bundled corpus loads");
    let ctx = Ctx { corpus, engine: HomflyEngine::new(EngineOptions { parallelism: Parallelism::Parallel, ..Default::default() }) };
    let mut gate = Gate { failed: 0 };
    println!("acceptance over {} corpus records", ctx.corpus.len());
    engine_correctness(&ctx, &mut gate);
    skein_relation(&ctx, &mut gate);
    main_bound(&ctx, &mut gate);
    top_monomial(&ctx, &mut gate);
    block_identity(&ctx, &mut gate);
    signature_bound(&ctx, &mut gate);
    slice_bound(&ctx, &mut gate);
    six_one(&ctx, &mut gate);
    structural(&ctx, &mut gate);
    conjecture(&ctx, &mut gate);
    if gate.failed == 0 {
        println!("all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", gate.failed);
        ExitCode::FAILURE
    }
}
