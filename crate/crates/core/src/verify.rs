//! Seeded property suites over the corpus, shared by the command-line
//! `verify` command and the acceptance tests.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{quotient_by_torsion, FgAbelianGroup, PrimeSet};
use crate::bar::homology;
use crate::corpus::{corpus, presentation_file};
use crate::cube::{is_double_extension, CubeExtension, CubeMorphism};
use crate::error::{Error, Result};
use crate::galois::{is_central, GaloisContext};
use crate::group::{
    closure_p, closure_p_by_powers, commutator_subgroup, homomorphisms, normal_subgroups, quotient,
    surjections_up_to_inner, FiniteGroup, GroupHom, Subgroup,
};
use crate::hopf::{hopf_h2, hopf_pi_n_localized, NilPresentation};

pub const SUITES: [&str; 7] = [
    "hopf",
    "localization",
    "centrality",
    "characterisation",
    "closure",
    "baer",
    "cube",
];

/// Failures beyond this many are counted but not described.
const MAX_DUMPS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest corpus group order used by the suites.
    pub max_order: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 7,
            max_order: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failed: usize,
    /// Descriptions of the first failures.
    pub counterexamples: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            cases: 0,
            failed: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.counterexamples.len() < MAX_DUMPS {
                self.counterexamples.push(describe());
            }
        }
    }

    fn check_result(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, describe),
            Err(e) => self.check(false, || format!("{}: error {e}", describe())),
        }
    }
}

/// Runs `"all"`, `"none"` or a single suite name.
pub fn run(suite: &str, opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    match suite {
        "none" => Ok(Vec::new()),
        "all" => SUITES.iter().map(|s| run_suite(s, opts)).collect(),
        s => Ok(vec![run_suite(s, opts)?]),
    }
}

pub fn run_suite(suite: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut r = SuiteReport::new(suite, opts.seed);
    match suite {
        "hopf" => hopf_suite(&mut r, opts),
        "localization" => localization_suite(&mut r, opts),
        "centrality" => centrality_suite(&mut r, opts),
        "characterisation" => characterisation_suite(&mut r, opts),
        "closure" => closure_suite(&mut r, opts, &mut rng, 500),
        "baer" => baer_suite(&mut r, opts, &mut rng, 200),
        "cube" => cube_suite(&mut r, opts, &mut rng, 200),
        _ => {
            return Err(Error::Invalid(format!(
                "unknown suite {suite:?}; expected one of {SUITES:?}, all, none"
            )))
        }
    }
    Ok(r)
}

/// Corpus groups of order at most `max_order`, in corpus order.
pub fn corpus_groups(max_order: usize) -> Vec<(String, FiniteGroup)> {
    corpus()
        .iter()
        .filter_map(|e| e.group.build().ok().map(|g| (e.name.clone(), g)))
        .filter(|(_, g)| g.order() <= max_order)
        .collect()
}

fn prime_sets() -> Vec<PrimeSet> {
    [vec![], vec![2], vec![3], vec![2, 3]]
        .into_iter()
        .map(|p| PrimeSet::new(p).expect("primes"))
        .collect()
}

fn hopf_suite(r: &mut SuiteReport, opts: &VerifyOptions) {
    for e in corpus() {
        let Some(text) = e.presentation_text() else {
            continue;
        };
        let Ok(g) = e.group.build() else { continue };
        if g.order() > opts.max_order {
            continue;
        }
        let res = (|| {
            let hopf = hopf_h2(&NilPresentation::parse(text)?)?;
            Ok(hopf.value()? == &homology(&g, 2)?)
        })();
        r.check_result(res, || format!("{}: Hopf H2 differs from bar H2", e.name));
    }
    for (a, b) in [(2u64, 2u64), (2, 4), (3, 6), (4, 6)] {
        let res = (|| {
            let text = format!("gens: x y\nrels: x^{a}, y^{b}, [x,y]\nclass: 1");
            let hopf = hopf_h2(&NilPresentation::parse(&text)?)?;
            let g = crate::group::named_group(&format!("C{a}xC{b}"))?;
            let bar = homology(&g, 2)?;
            let gcd = FgAbelianGroup::cyclic(num_integer::gcd(a, b));
            Ok(hopf.value()? == &bar && bar == gcd)
        })();
        r.check_result(res, || {
            format!("C{a}xC{b}: engines disagree or differ from the closed form")
        });
    }
}

fn localization_suite(r: &mut SuiteReport, opts: &VerifyOptions) {
    for e in corpus() {
        let Some(text) = e.presentation_text() else {
            continue;
        };
        let Ok(g) = e.group.build() else { continue };
        if g.order() > opts.max_order {
            continue;
        }
        let (pres, bar) = match (NilPresentation::parse(text), homology(&g, 2)) {
            (Ok(p), Ok(b)) => (p, b),
            _ => {
                r.check(false, || format!("{}: could not set up", e.name));
                continue;
            }
        };
        for primes in prime_sets() {
            let res = hopf_pi_n_localized(&pres, 1, &primes)
                .and_then(|h| Ok(h.value()? == &quotient_by_torsion(&bar, &primes)));
            r.check_result(res, || {
                format!("{} P={primes:?}: localized value differs", e.name)
            });
        }
        let res = (|| Ok(hopf_pi_n_localized(&pres, 1, &PrimeSet::empty())? == hopf_h2(&pres)?))();
        r.check_result(res, || {
            format!("{}: empty prime set differs from the plain formula", e.name)
        });
    }
}

/// Every surjection between corpus groups, up to inner automorphisms of the domain.
pub fn corpus_surjections(max_order: usize) -> Vec<(String, String, GroupHom)> {
    let groups = corpus_groups(max_order);
    let mut out = Vec::new();
    for (gn, g) in &groups {
        for (hn, h) in &groups {
            if g.order() % h.order() != 0 {
                continue;
            }
            for f in surjections_up_to_inner(g, h) {
                out.push((gn.clone(), hn.clone(), f));
            }
        }
    }
    out
}

fn centrality_suite(r: &mut SuiteReport, opts: &VerifyOptions) {
    let base = GaloisContext::base();
    for (gn, hn, f) in corpus_surjections(opts.max_order) {
        let res = (|| {
            let kp = base.kernel_pair(&f)?;
            let normal = base.is_trivial_ext(&kp.p1)?;
            let trivial = base.is_trivial_ext(&f)?;
            Ok(normal == is_central(&f) && (!trivial || normal))
        })();
        r.check_result(res, || format!("{gn} -> {hn} {:?}", f.images()));
    }
    if opts.max_order >= 8 {
        let res = (|| {
            let q8 = FiniteGroup::quaternion();
            let minus = q8
                .elements()
                .find(|&x| q8.element_order(x) == 2)
                .expect("Q8 has an involution");
            let f = quotient(&q8, &Subgroup::generated(&q8, &[minus]))?.projection;
            Ok(base.is_normal_ext(&f)? && !base.is_trivial_ext(&f)?)
        })();
        r.check_result(res, || {
            "Q8 -> V4 is not a normal, non-trivial witness".into()
        });
    }
}

fn characterisation_suite(r: &mut SuiteReport, opts: &VerifyOptions) {
    let surj = corpus_surjections(opts.max_order);
    for primes in prime_sets() {
        let ctx = GaloisContext::composite(primes.clone());
        for (gn, hn, f) in &surj {
            let res = (|| {
                let kp = ctx.kernel_pair(f)?;
                Ok(ctx.is_trivial_ext(&kp.p1)? == ctx.characterisation_normal(f)?)
            })();
            r.check_result(res, || {
                format!("{gn} -> {hn} {:?} P={primes:?}", f.images())
            });
        }
    }
}

fn random_prime_set(rng: &mut ChaCha8Rng) -> PrimeSet {
    let primes: Vec<u64> = [2u64, 3, 5]
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    PrimeSet::new(primes).expect("primes")
}

fn closure_suite(
    r: &mut SuiteReport,
    opts: &VerifyOptions,
    rng: &mut ChaCha8Rng,
    instances: usize,
) {
    let groups = corpus_groups(opts.max_order.max(2));
    let normals: Vec<Vec<Subgroup>> = groups.iter().map(|(_, g)| normal_subgroups(g)).collect();
    let mut done = 0;
    while done < instances {
        let gi = rng.gen_range(0..groups.len());
        let (name, a) = &groups[gi];
        let primes = random_prime_set(rng);
        let res = (|| {
            let w = Subgroup::whole(a);
            let d = commutator_subgroup(&w, &w)?;
            let above: Vec<&Subgroup> =
                normals[gi].iter().filter(|k| d.is_subgroup_of(k)).collect();
            let k = *above.choose(rng).expect("A itself contains [A,A]");
            let cl = closure_p(a, k, &primes)?;
            let agree = cl == closure_p_by_powers(a, k, &primes)?;
            let extensive = k.is_subgroup_of(&cl);
            let idempotent = closure_p(a, &cl, &primes)? == cl;
            let bigger: Vec<&&Subgroup> = above.iter().filter(|k2| k.is_subgroup_of(k2)).collect();
            let k2 = **bigger.choose(rng).expect("K is above itself");
            let monotone = cl.is_subgroup_of(&closure_p(a, k2, &primes)?);
            // openness along a random quotient map f: A -> B
            let n = normals[gi].choose(rng).expect("trivial subgroup");
            let q = quotient(a, n)?;
            let b = &q.group;
            let wb = Subgroup::whole(b);
            let db = commutator_subgroup(&wb, &wb)?;
            let above_b: Vec<Subgroup> = normal_subgroups(b)
                .into_iter()
                .filter(|k| db.is_subgroup_of(k))
                .collect();
            let kb = above_b.choose(rng).expect("B contains [B,B]");
            let lhs = q.projection.preimage(&closure_p(b, kb, &primes)?)?;
            let rhs = closure_p(a, &q.projection.preimage(kb)?, &primes)?;
            Ok(agree && extensive && idempotent && monotone && lhs == rhs)
        })();
        r.check_result(res, || format!("{name} P={primes:?}"));
        done += 1;
    }
}

fn baer_suite(r: &mut SuiteReport, opts: &VerifyOptions, rng: &mut ChaCha8Rng, pairs: usize) {
    let base = GaloisContext::base();
    let normal: Vec<(String, String, GroupHom)> = corpus_surjections(opts.max_order.min(8))
        .into_iter()
        .filter(|(_, _, f)| base.is_normal_ext(f).unwrap_or(false))
        .collect();
    let mut all: Vec<(usize, usize)> = (0..normal.len())
        .flat_map(|a| (0..normal.len()).map(move |b| (a, b)))
        .collect();
    if all.len() > pairs {
        all.shuffle(rng);
        all.truncate(pairs);
        all.sort_unstable();
    }
    let mut homs: HashMap<(String, String), Vec<GroupHom>> = HashMap::new();
    let mut homs_between = |an: &str, a: &FiniteGroup, bn: &str, b: &FiniteGroup| {
        homs.entry((an.to_string(), bn.to_string()))
            .or_insert_with(|| homomorphisms(a, b))
            .clone()
    };
    for (i, j) in all {
        let (pa, pb, p) = &normal[i];
        let (qa, qb, q) = &normal[j];
        let lifts_of = homs_between(pa, p.domain(), qa, q.domain());
        for f0 in homs_between(pb, p.codomain(), qb, q.codomain()) {
            let Ok(target) = p.then(&f0) else { continue };
            let lifts: Vec<&GroupHom> = lifts_of
                .iter()
                .filter(|f1| f1.then(q).ok().as_ref() == Some(&target))
                .collect();
            if lifts.len() < 2 {
                continue;
            }
            let first = base.induced_gal_map(p, q, lifts[0], &f0);
            for f1 in &lifts[1..] {
                let other = base.induced_gal_map(p, q, f1, &f0);
                let ok = matches!((&first, &other), (Ok(x), Ok(y)) if x == y);
                r.check(ok, || {
                    format!("({pa} -> {pb}) to ({qa} -> {qb}): lifts induce different maps")
                });
            }
        }
    }
    let res = (|| {
        let two = NilPresentation::parse(
            presentation_file("V4.pres").ok_or_else(|| Error::Invalid("V4.pres".into()))?,
        )?;
        let three = NilPresentation::parse(
            presentation_file("V4_3gen.pres")
                .ok_or_else(|| Error::Invalid("V4_3gen.pres".into()))?,
        )?;
        Ok(hopf_h2(&two)?.value == hopf_h2(&three)?.value)
    })();
    r.check_result(res, || "two presentations of V4 give different H2".into());
}

/// Renumbers every object of a cube by a random permutation, conjugating the faces.
pub fn twist_cube(cube: &CubeExtension, rng: &mut ChaCha8Rng) -> Result<CubeExtension> {
    let full = cube.full();
    let mut objects = Vec::new();
    let mut back = Vec::new();
    for s in 0..=full {
        let g = cube.object(s);
        let mut perm: Vec<usize> = (1..g.order()).collect();
        perm.shuffle(rng);
        perm.insert(0, 0);
        let (h, iso) = g.relabel(&perm)?;
        objects.push(h);
        back.push(iso);
    }
    let mut faces = Vec::new();
    for t in 0..=full {
        for i in (0..cube.n()).filter(|&i| t >> i & 1 == 1) {
            let f = back[t]
                .then(cube.face(t, i))?
                .then(&back[t & !(1 << i)].inverse()?)?;
            faces.push((t, i, f));
        }
    }
    CubeExtension::new_diagram(cube.n(), objects, faces)
}

/// A random cube: quotients of a corpus group by random normal subgroups,
/// or (for squares) a diagonal square `G -> H => K` built from random maps.
pub fn random_cube(
    groups: &[(String, FiniteGroup)],
    rng: &mut ChaCha8Rng,
    n: usize,
) -> Result<(String, CubeExtension)> {
    let (name, g) = groups.choose(rng).expect("non-empty corpus");
    if n == 2 && rng.gen_bool(0.3) {
        let (hn, h) = groups
            .iter()
            .filter(|(_, h)| h.order() <= 8)
            .collect::<Vec<_>>()
            .choose(rng)
            .copied()
            .expect("small group");
        let (kn, k) = groups
            .iter()
            .filter(|(_, k)| k.order() <= 4)
            .collect::<Vec<_>>()
            .choose(rng)
            .copied()
            .expect("small group");
        let f = homomorphisms(g, h).choose(rng).cloned().expect("zero map");
        let e = homomorphisms(h, k).choose(rng).cloned().expect("zero map");
        let objects = vec![k.clone(), h.clone(), h.clone(), g.clone()];
        let faces = vec![(1, 0, e.clone()), (2, 1, e), (3, 0, f.clone()), (3, 1, f)];
        let cube = CubeExtension::new_diagram(2, objects, faces)?;
        return Ok((
            format!("diagonal {name} -> {hn} -> {kn}"),
            twist_cube(&cube, rng)?,
        ));
    }
    let normals = normal_subgroups(g);
    let kernels: Vec<Subgroup> = (0..n)
        .map(|_| normals.choose(rng).expect("trivial").clone())
        .collect();
    let orders: Vec<usize> = kernels.iter().map(|k| k.order()).collect();
    let cube = CubeExtension::of_quotients(g, &kernels)?;
    Ok((format!("{name} / {orders:?}"), twist_cube(&cube, rng)?))
}

/// Checks the re-indexing and kernel laws on one cube.
pub fn check_cube_laws(a: &CubeExtension) -> Result<Vec<&'static str>> {
    let n = a.n();
    let mut broken = Vec::new();
    let ker = a.ker_n()?;
    for i in 0..n {
        let d = a.delta(i)?;
        if d.to_cube(i)? != *a {
            broken.push("delta roundtrip");
        }
        if CubeMorphism::new(d.dom.clone(), d.cod.clone(), d.components.clone()).is_err() {
            broken.push("delta naturality");
        }
        let rho = a.rho(i)?;
        if rho.to_cube(i)? != *a {
            broken.push("rho roundtrip");
        }
        if rho.ker_n()?.kernel()? != ker {
            broken.push("Ker via rho");
        }
        let kc = d.kernel()?;
        let top = kc.cube.full();
        if kc.inclusions[top].image_of(&kc.cube.ker_n()?)? != ker {
            broken.push("Ker via delta");
        }
        if rho.dom_top() != a.dom_n() || d.dom.dom_n() != a.dom_n() {
            broken.push("Dom identities");
        }
        for j in 0..n {
            if i < j && rho.delta(j - 1)? != a.delta(j)?.rho(i)? {
                broken.push("interchange i < j");
            }
            if j < i && rho.delta(j)? != a.delta(j)?.rho(i - 1)? {
                broken.push("interchange j < i");
            }
            if i < j {
                let top = d.dom.delta(j - 1)?;
                let bottom = d.cod.delta(j - 1)?;
                let dj = a.delta(j)?;
                let left = dj.dom.delta(i)?;
                let right = dj.cod.delta(i)?;
                if top.then(&right)? != left.then(&bottom)? {
                    broken.push("delta square");
                }
            }
        }
    }
    if n == 2 {
        let d = a.delta(1)?;
        let double = is_double_extension(
            &d.components[1],
            &d.components[0],
            d.dom.face(1, 0),
            d.cod.face(1, 0),
        )?;
        if double != a.is_n_extension() {
            broken.push("double extension predicate");
        }
    }
    Ok(broken)
}

fn cube_suite(r: &mut SuiteReport, opts: &VerifyOptions, rng: &mut ChaCha8Rng, instances: usize) {
    let groups = corpus_groups(opts.max_order.clamp(4, 24));
    for k in 0..instances {
        let n = if k % 2 == 0 { 2 } else { 3 };
        match random_cube(&groups, rng, n) {
            Ok((name, cube)) => {
                let res = check_cube_laws(&cube);
                r.check(matches!(&res, Ok(b) if b.is_empty()), || {
                    format!("{n}-cube {name}: {res:?}")
                });
            }
            Err(e) => r.check(false, || format!("{n}-cube construction failed: {e}")),
        }
    }
}
