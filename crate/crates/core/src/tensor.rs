//! Mixed completed tensor products `X ⊗̂ M` for `M` with a finite pseudobasis,
//! computed componentwise, and brute-force exactness checks on finite p-groups.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intlinalg::{image_presentation, quotient, FiniteModule, IntMatrix, ModuleMap};

/// The component module `Z_p^{free_rank} ⊕ ⊕ Z/p^{a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub free_rank: u32,
    pub torsion: Vec<u32>,
}

impl Component {
    pub fn flat() -> Self {
        Component {
            free_rank: 1,
            torsion: Vec::new(),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// `∏_{i ∈ I}` of a component module, `I` a finite list of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudobasisModule {
    pub labels: Vec<String>,
    pub component: Component,
}

impl PseudobasisModule {
    pub fn new(labels: Vec<String>, component: Component) -> Result<Self> {
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Precondition("pseudobasis labels must be distinct".into()));
        }
        Ok(PseudobasisModule { labels, component })
    }

    /// `∏_{i < n} Z_p` with labels `e0, e1, ...`.
    pub fn flat(n: usize) -> Self {
        PseudobasisModule {
            labels: (0..n).map(|i| format!("e{i}")).collect(),
            component: Component::flat(),
        }
    }
}

/// `X ⊗ C` for one component, as exponents: copies of `X` for the free part and
/// `X / p^a X` for each torsion factor.
fn component_exponents(x: &FiniteModule, c: &Component) -> Vec<u32> {
    let mut out = Vec::new();
    for _ in 0..c.free_rank {
        out.extend(&x.exponents);
    }
    for &a in &c.torsion {
        out.extend(x.exponents.iter().map(|&e| e.min(a)));
    }
    out
}

/// `X ⊗̂ M = ∏_{i ∈ I} X ⊗ C`, generators ordered label by label.
pub fn mixed_tensor(x: &FiniteModule, m: &PseudobasisModule) -> FiniteModule {
    let one = component_exponents(x, &m.component);
    let mut exps = Vec::with_capacity(one.len() * m.labels.len());
    for _ in &m.labels {
        exps.extend(&one);
    }
    FiniteModule::new(x.p, exps)
}

/// `f ⊗ id_M`: block diagonal with one block of `f` per copy of `X` in `X ⊗̂ M`.
pub fn mixed_tensor_map(f: &ModuleMap, m: &PseudobasisModule) -> ModuleMap {
    let source = mixed_tensor(&f.source, m);
    let target = mixed_tensor(&f.target, m);
    let copies = m.labels.len() * (m.component.free_rank as usize + m.component.torsion.len());
    let (rs, cs) = (f.target.rank(), f.source.rank());
    let mut matrix: IntMatrix = vec![vec![BigInt::zero(); cs * copies]; rs * copies];
    for b in 0..copies {
        for i in 0..rs {
            for j in 0..cs {
                matrix[b * rs + i][b * cs + j] = f.matrix[i][j].clone();
            }
        }
    }
    for (row, &e) in matrix.iter_mut().zip(&target.exponents) {
        let q = num_traits::pow(BigInt::from(target.p), e as usize);
        for x in row.iter_mut() {
            *x = num_integer::Integer::mod_floor(x, &q);
        }
    }
    ModuleMap { source, target, matrix }
}

/// Whether `0 → A →f B →g C → 0` is exact, by enumerating every element.
pub fn is_short_exact(f: &ModuleMap, g: &ModuleMap) -> bool {
    if f.target != g.source {
        return false;
    }
    let (Some(fm), Some(gm)) = (SmallMap::new(f), SmallMap::new(g)) else {
        return false;
    };
    // f injective
    let mut image_f = vec![false; fm.target_order];
    let mut count_f = 0usize;
    let mut injective = true;
    fm.for_each(|_, y| {
        if image_f[y] {
            injective = false;
        } else {
            image_f[y] = true;
            count_f += 1;
        }
    });
    if !injective {
        return false;
    }
    // ker g = im f, g surjective
    let mut image_g = vec![false; gm.target_order];
    let mut kernel_g = 0usize;
    let mut inside = true;
    gm.for_each(|x, z| {
        if z == 0 {
            kernel_g += 1;
            inside &= image_f[x];
        }
        image_g[z] = true;
    });
    inside && kernel_g == count_f && image_g.iter().all(|&b| b)
}

/// A homomorphism of small groups on mixed-radix element indices.
struct SmallMap {
    source_moduli: Vec<u64>,
    target_moduli: Vec<u64>,
    matrix: Vec<Vec<u64>>,
    target_order: usize,
}

impl SmallMap {
    fn new(f: &ModuleMap) -> Option<Self> {
        let moduli = |m: &FiniteModule| -> Option<Vec<u64>> {
            m.exponents.iter().map(|&e| (m.p as u64).checked_pow(e)).collect()
        };
        let source_moduli = moduli(&f.source)?;
        let target_moduli = moduli(&f.target)?;
        let order = |ms: &[u64]| ms.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m)).filter(|&o| o <= 1 << 26);
        order(&source_moduli)?;
        let target_order = order(&target_moduli)? as usize;
        let matrix = f
            .matrix
            .iter()
            .zip(&target_moduli)
            .map(|(row, &q)| {
                row.iter()
                    .map(|x| u64::try_from(num_integer::Integer::mod_floor(x, &BigInt::from(q))).ok())
                    .collect::<Option<Vec<u64>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SmallMap {
            source_moduli,
            target_moduli,
            matrix,
            target_order,
        })
    }

    /// Calls `visit(source index, image index)` for every source element.
    fn for_each(&self, mut visit: impl FnMut(usize, usize)) {
        let mut x = vec![0u64; self.source_moduli.len()];
        let mut index = 0usize;
        loop {
            let mut image = 0usize;
            for (row, &q) in self.matrix.iter().zip(&self.target_moduli) {
                let v = row.iter().zip(&x).fold(0u64, |acc, (a, b)| (acc + a * b) % q);
                image = image * q as usize + v as usize;
            }
            visit(index, image);
            // odometer, last coordinate fastest, matching the image encoding
            let mut i = x.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                x[i] += 1;
                if x[i] < self.source_moduli[i] {
                    break;
                }
                x[i] = 0;
            }
            index += 1;
        }
    }
}

/// Abelian p-groups of order `p^n` for `n <= max_len`, by partitions of `n`.
pub fn groups_up_to(p: u32, max_len: u32) -> Vec<FiniteModule> {
    fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            partitions(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for n in 0..=max_len {
        let mut parts = Vec::new();
        partitions(n, n, &mut Vec::new(), &mut parts);
        out.extend(parts.into_iter().map(|e| FiniteModule::new(p, e)));
    }
    out
}

/// Every subgroup of `b`, each given by a generating set.
pub fn subgroups(b: &FiniteModule) -> Vec<Vec<Vec<BigInt>>> {
    let elements = b.elements();
    let mut seen: HashSet<BTreeSet<Vec<BigInt>>> = HashSet::new();
    let zero: BTreeSet<Vec<BigInt>> = std::iter::once(vec![BigInt::zero(); b.rank()]).collect();
    seen.insert(zero.clone());
    let mut frontier = vec![(zero, Vec::new())];
    let mut out = vec![Vec::new()];
    while let Some((set, gens)) = frontier.pop() {
        for g in &elements {
            if set.contains(g) {
                continue;
            }
            let grown = span_with(b, &set, g);
            if seen.insert(grown.clone()) {
                let mut gens2: Vec<Vec<BigInt>> = gens.clone();
                gens2.push(g.clone());
                out.push(gens2.clone());
                frontier.push((grown, gens2));
            }
        }
    }
    out
}

fn span_with(b: &FiniteModule, set: &BTreeSet<Vec<BigInt>>, g: &[BigInt]) -> BTreeSet<Vec<BigInt>> {
    let mut out = set.clone();
    let mut multiple = g.to_vec();
    while !b.is_zero_vector(&multiple) {
        for s in set {
            let sum: Vec<BigInt> = s.iter().zip(&multiple).map(|(x, y)| x + y).collect();
            out.insert(b.reduce(&sum));
        }
        multiple = b.reduce(&multiple.iter().zip(g).map(|(x, y)| x + y).collect::<Vec<_>>());
    }
    out
}

/// Every short exact sequence `0 → A → B → B/A → 0` with `|B| <= p^max_len`.
pub fn short_exact_sequences(p: u32, max_len: u32) -> Vec<(ModuleMap, ModuleMap)> {
    let mut out = Vec::new();
    for b in groups_up_to(p, max_len) {
        for gens in subgroups(&b) {
            let incl = image_presentation(&gens, &b);
            let proj = quotient(&b, &gens);
            out.push((incl, proj));
        }
    }
    out
}

/// Result of checking that `- ⊗̂ M` preserves exactness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub sequences: usize,
    pub failures: usize,
}

pub fn check_tensor_exactness(p: u32, max_len: u32, m: &PseudobasisModule) -> ExactnessReport {
    let mut failures = 0;
    let seqs = short_exact_sequences(p, max_len);
    for (f, g) in &seqs {
        let base = is_short_exact(f, g);
        let tensored = is_short_exact(&mixed_tensor_map(f, m), &mixed_tensor_map(g, m));
        if !(base && tensored) {
            failures += 1;
        }
    }
    ExactnessReport {
        sequences: seqs.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_examples() {
        let x = FiniteModule::new(3, vec![1, 2]);
        assert_eq!(mixed_tensor(&x, &PseudobasisModule::flat(1)), x);
        let z9 = FiniteModule::new(3, vec![2]);
        assert_eq!(mixed_tensor(&z9, &PseudobasisModule::flat(3)).exponents, vec![2, 2, 2]);
    }

    #[test]
    fn z3_z9_z3_stays_exact() {
        let b = FiniteModule::new(3, vec![2]);
        let gens = vec![vec![BigInt::from(3)]];
        let f = image_presentation(&gens, &b);
        let g = quotient(&b, &gens);
        assert!(is_short_exact(&f, &g));
        let m = PseudobasisModule::flat(2);
        assert!(is_short_exact(&mixed_tensor_map(&f, &m), &mixed_tensor_map(&g, &m)));
    }

    #[test]
    fn torsion_component_breaks_injectivity() {
        // Z/3 -> Z/9 tensored with Z/3 is the zero map
        let b = FiniteModule::new(3, vec![2]);
        let gens = vec![vec![BigInt::from(3)]];
        let f = image_presentation(&gens, &b);
        let g = quotient(&b, &gens);
        let m = PseudobasisModule::new(vec!["a".into()], Component { free_rank: 0, torsion: vec![1] }).unwrap();
        assert!(!is_short_exact(&mixed_tensor_map(&f, &m), &mixed_tensor_map(&g, &m)));
    }

    #[test]
    fn subgroup_counts() {
        // (Z/3)^2 has 1 + 4 + 1 subgroups; Z/9 has 3
        assert_eq!(subgroups(&FiniteModule::new(3, vec![1, 1])).len(), 6);
        assert_eq!(subgroups(&FiniteModule::new(3, vec![2])).len(), 3);
        assert_eq!(groups_up_to(3, 3).len(), 7);
    }
}
