//! The product `u∘v = u(0)v` on the minimal-weight space of a family.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::element::{yplus_matrix, Involution, MatElement};
use super::family::{Family, FamilyKind};
use super::MatrixError;
use crate::foundation::{format_rational, rat, solve_in_span, Rational, SpanSolution, Vector};
use crate::report::{Failure, VerificationReport};
use crate::sampler::RationalSampler;

type Coords = Vec<Rational>;
type Matrix = Vec<Vec<Rational>>;

/// Basis of the minimal-weight space with the structure constants of `∘`.
#[derive(Clone, Debug)]
pub struct MinimalWeightAlgebra {
    pub kind: FamilyKind,
    pub basis: Vec<MatElement>,
    /// `table[a][b]`: coordinates of `basis[a] ∘ basis[b]`.
    pub table: Vec<Vec<Coords>>,
}

fn flat(e: &MatElement, s: u32) -> Vec<Rational> {
    e.matrix_at(0, s).into_iter().flatten().collect()
}

/// `u∘v`: the coefficient of `z^{-L}` in `Y⁺(u, z) v`.
pub fn circle_product(a: &MatElement, b: &MatElement, family: &Family) -> Result<MatElement, MatrixError> {
    let l = family.kind().label;
    for x in [a, b] {
        if !x.is_empty() && (x.weight() != Some(l) || !family.contains(x)) {
            return Err(MatrixError::NotMinimalWeight(x.to_string()));
        }
    }
    let out = yplus_matrix(a, b)?.coeff(-(l as i64)).with_k(family.kind().k);
    if !family.contains(&out) {
        return Err(MatrixError::NotClosed(out.to_string()));
    }
    Ok(out)
}

impl MinimalWeightAlgebra {
    pub fn new(family: &Family) -> Result<Self, MatrixError> {
        let kind = family.kind();
        let basis = family.minimal_weight_basis();
        let s = kind.shift();
        let cols: Vec<Vec<Rational>> = basis.iter().map(|b| flat(b, s)).collect();
        let mut table = Vec::with_capacity(basis.len());
        for a in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in &basis {
                let p = circle_product(a, b, family)?;
                match solve_in_span(&cols, &flat(&p, s)).map_err(|e| MatrixError::Parse(e.to_string()))? {
                    SpanSolution::Coefficients(c) => row.push(c),
                    SpanSolution::NotInSpan => return Err(MatrixError::NotClosed(p.to_string())),
                }
            }
            table.push(row);
        }
        Ok(Self { kind, basis, table })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn unit(&self, a: usize) -> Coords {
        let mut v = vec![rat(0); self.dim()];
        v[a] = rat(1);
        v
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Coords {
        let mut out = vec![rat(0); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if Vector::is_zero(xa) {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if Vector::is_zero(yb) {
                    continue;
                }
                let c = xa * yb;
                for (o, t) in out.iter_mut().zip(&self.table[a][b]) {
                    *o += &c * t;
                }
            }
        }
        out
    }

    pub fn to_element(&self, x: &[Rational]) -> MatElement {
        let mut out = MatElement::new(self.kind.k);
        for (c, b) in x.iter().zip(&self.basis) {
            out.add_scaled(b, c);
        }
        out
    }

    fn random(&self, rng: &mut RationalSampler) -> Coords {
        (0..self.dim()).map(|_| rng.next_rational()).collect()
    }

    fn describe(&self, x: &[Rational]) -> String {
        self.to_element(x).to_string()
    }
}

fn add(x: &[Rational], y: &[Rational]) -> Coords {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub(x: &[Rational], y: &[Rational]) -> Coords {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn is_zero(x: &[Rational]) -> bool {
    x.iter().all(Vector::is_zero)
}

fn params(kind: FamilyKind, command: &str) -> VerificationReport {
    VerificationReport::new(command).with_param("family", kind.kind).with_param("k", kind.k).with_param("L", kind.label)
}

/// Commutativity and the Jordan identity `(x∘y)∘(x∘x) = x∘(y∘(x∘x))`:
/// the linearized identity on every basis quadruple, then the identity
/// itself on random elements.
pub fn check_jordan(family: &Family, random: usize, seed: u64) -> Result<VerificationReport, MatrixError> {
    let kind = family.kind();
    if kind.label % 2 == 1 {
        return Err(MatrixError::InvalidFamily(format!("the Jordan check needs even L, got {}", kind.label)));
    }
    let alg = MinimalWeightAlgebra::new(family)?;
    let mut rep = params(kind, "jordan");
    let n = alg.dim();
    let e: Vec<Coords> = (0..n).map(|a| alg.unit(a)).collect();
    for a in 0..n {
        for b in a..n {
            rep.check(alg.table[a][b] == alg.table[b][a], || {
                Failure::new(
                    format!("jordan/commutative/{a}/{b}"),
                    json!({ "x": alg.basis[a], "y": alg.basis[b] }),
                    alg.describe(&alg.table[b][a]),
                    alg.describe(&alg.table[a][b]),
                )
            });
        }
    }
    // (p, q, r) = (p∘q)∘r - p∘(q∘r); multilinear part of (x, y, x∘x).
    let assoc =
        |p: &[Rational], q: &[Rational], r: &[Rational]| sub(&alg.mul(&alg.mul(p, q), r), &alg.mul(p, &alg.mul(q, r)));
    let sq = |p: &[Rational], q: &[Rational]| add(&alg.mul(p, q), &alg.mul(q, p));
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let (bc, ca, ab) = (sq(&e[b], &e[c]), sq(&e[c], &e[a]), sq(&e[a], &e[b]));
                for y in 0..n {
                    let total =
                        add(&add(&assoc(&e[a], &e[y], &bc), &assoc(&e[b], &e[y], &ca)), &assoc(&e[c], &e[y], &ab));
                    rep.check(is_zero(&total), || {
                        Failure::new(
                            format!("jordan/linearized/{a}/{b}/{c}/{y}"),
                            json!({ "a": alg.basis[a], "b": alg.basis[b], "c": alg.basis[c], "y": alg.basis[y] }),
                            "0",
                            alg.describe(&total),
                        )
                    });
                }
            }
        }
    }
    let mut rng = RationalSampler::new(seed);
    for t in 0..random {
        let (x, y) = (alg.random(&mut rng), alg.random(&mut rng));
        let xx = alg.mul(&x, &x);
        let lhs = alg.mul(&alg.mul(&x, &y), &xx);
        let rhs = alg.mul(&x, &alg.mul(&y, &xx));
        rep.check(lhs == rhs, || {
            Failure::new(
                format!("jordan/random/{t:03}"),
                json!({ "x": alg.to_element(&x), "y": alg.to_element(&y), "seed": seed }),
                alg.describe(&rhs),
                alg.describe(&lhs),
            )
        });
        let (xy, yx) = (alg.mul(&x, &y), alg.mul(&y, &x));
        rep.check(xy == yx, || {
            Failure::new(
                format!("jordan/random-commutative/{t:03}"),
                json!({ "seed": seed }),
                alg.describe(&yx),
                alg.describe(&xy),
            )
        });
    }
    rep.detail("dimension", n);
    Ok(rep.finalize())
}

/// Anticommutativity and the Jacobi identity on every basis triple and on
/// random elements.
pub fn check_lie(family: &Family, random: usize, seed: u64) -> Result<VerificationReport, MatrixError> {
    let kind = family.kind();
    if kind.label % 2 == 0 {
        return Err(MatrixError::InvalidFamily(format!("the Lie check needs odd L, got {}", kind.label)));
    }
    let alg = MinimalWeightAlgebra::new(family)?;
    let mut rep = params(kind, "lie");
    let n = alg.dim();
    let e: Vec<Coords> = (0..n).map(|a| alg.unit(a)).collect();
    let jacobi = |x: &[Rational], y: &[Rational], z: &[Rational]| {
        add(&add(&alg.mul(x, &alg.mul(y, z)), &alg.mul(y, &alg.mul(z, x))), &alg.mul(z, &alg.mul(x, y)))
    };
    for a in 0..n {
        for b in a..n {
            let s = add(&alg.table[a][b], &alg.table[b][a]);
            rep.check(is_zero(&s), || {
                Failure::new(
                    format!("lie/anticommutative/{a}/{b}"),
                    json!({ "x": alg.basis[a], "y": alg.basis[b] }),
                    "0",
                    alg.describe(&s),
                )
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let j = jacobi(&e[a], &e[b], &e[c]);
                rep.check(is_zero(&j), || {
                    Failure::new(
                        format!("lie/jacobi/{a}/{b}/{c}"),
                        json!({ "x": alg.basis[a], "y": alg.basis[b], "z": alg.basis[c] }),
                        "0",
                        alg.describe(&j),
                    )
                });
            }
        }
    }
    let mut rng = RationalSampler::new(seed);
    for t in 0..random {
        let (x, y, z) = (alg.random(&mut rng), alg.random(&mut rng), alg.random(&mut rng));
        let j = jacobi(&x, &y, &z);
        rep.check(is_zero(&j), || {
            Failure::new(format!("lie/random/{t:03}"), json!({ "seed": seed }), "0", alg.describe(&j))
        });
        let s = add(&alg.mul(&x, &y), &alg.mul(&y, &x));
        rep.check(is_zero(&s), || {
            Failure::new(format!("lie/random-anticommutative/{t:03}"), json!({ "seed": seed }), "0", alg.describe(&s))
        });
    }
    rep.detail("dimension", n);
    Ok(rep.finalize())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelLabel {
    JordanA,
    JordanB,
    JordanC,
    #[serde(rename = "gl")]
    Gl,
    #[serde(rename = "o")]
    O,
    #[serde(rename = "sp")]
    Sp,
}

impl fmt::Display for ModelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelLabel::JordanA => "JordanA",
            ModelLabel::JordanB => "JordanB",
            ModelLabel::JordanC => "JordanC",
            ModelLabel::Gl => "gl",
            ModelLabel::O => "o",
            ModelLabel::Sp => "sp",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Identification {
    pub label: ModelLabel,
    /// The global scalar with `u∘v = λ·model(u, v)`; `None` when every model
    /// product vanishes (an abelian algebra fixes no scalar).
    #[serde(serialize_with = "ser_lambda", deserialize_with = "de_lambda")]
    pub lambda: Option<Rational>,
    pub dimension: usize,
    pub k: usize,
}

fn ser_lambda<S: serde::Serializer>(l: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    l.as_ref().map(format_rational).serialize(s)
}

fn de_lambda<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
    let v: Option<String> = Option::deserialize(d)?;
    v.map(|s| crate::foundation::parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|t| &a[i][t] * &b[t][j]).sum()).collect()).collect()
}

fn mat_lin(a: &Matrix, b: &Matrix, s: i64) -> Matrix {
    a.iter().zip(b).map(|(r, q)| r.iter().zip(q).map(|(x, y)| x + y * rat(s)).collect()).collect()
}

/// Subspace of `M_k` cut out by `twist(u) = sign·u`.
fn in_eigenspace(m: &Matrix, inv: Involution, sign: i64) -> bool {
    let t = inv.apply_matrix(m);
    t == m.iter().map(|r| r.iter().map(|x| x * rat(sign)).collect()).collect::<Matrix>()
}

fn eigenspace_dim(k: usize, inv: Involution, sign: i64) -> usize {
    let mut span = crate::foundation::Echelon::<(usize, usize)>::new();
    for i in 0..k {
        for j in 0..k {
            let mut u = vec![vec![rat(0); k]; k];
            u[i][j] = rat(1);
            let v = mat_lin(&u, &inv.apply_matrix(&u), sign);
            let row =
                v.iter().enumerate().flat_map(|(a, r)| r.iter().enumerate().map(move |(b, x)| ((a, b), x.clone())));
            span.insert(&row.filter(|(_, x)| !Vector::is_zero(x)).collect());
        }
    }
    span.rank()
}

/// Matches the `∘` table, up to one global scalar, against the matrix models
/// (full, symmetric, `†`-hermitian matrices under `ab + ba`; full,
/// antisymmetric, `†`-antihermitian matrices under `ab - ba`).
pub fn identify_model(family: &Family) -> Result<Identification, MatrixError> {
    let kind = family.kind();
    let alg = MinimalWeightAlgebra::new(family)?;
    let n = alg.dim();
    let k = kind.k;
    let s = kind.shift();
    let commutative = (0..n).all(|a| (0..n).all(|b| alg.table[a][b] == alg.table[b][a]));
    let anti = (0..n).all(|a| (0..n).all(|b| is_zero(&add(&alg.table[a][b], &alg.table[b][a]))));
    let mats: Vec<Matrix> = alg.basis.iter().map(|b| b.matrix_at(0, s)).collect();
    let fits = |inv: Involution, sign: i64| {
        (inv == Involution::Transpose || k % 2 == 0)
            && mats.iter().all(|m| in_eigenspace(m, inv, sign))
            && eigenspace_dim(k, inv, sign) == n
    };
    // A zero product is both; the parity of L then picks the model family.
    let jordan = if commutative && anti { kind.label % 2 == 0 } else { commutative };
    let (label, model_sign) = if jordan {
        let label = if n == k * k {
            ModelLabel::JordanA
        } else if fits(Involution::Transpose, 1) {
            ModelLabel::JordanB
        } else if fits(Involution::Symplectic, 1) {
            ModelLabel::JordanC
        } else {
            return Err(MatrixError::NoModel(format!("{kind}: commutative of dimension {n} matches no matrix model")));
        };
        (label, 1)
    } else if anti {
        let label = if n == k * k {
            ModelLabel::Gl
        } else if fits(Involution::Transpose, -1) {
            ModelLabel::O
        } else if fits(Involution::Symplectic, -1) {
            ModelLabel::Sp
        } else {
            return Err(MatrixError::NoModel(format!(
                "{kind}: anticommutative of dimension {n} matches no matrix model"
            )));
        };
        (label, -1)
    } else {
        return Err(MatrixError::NoModel(format!("{kind}: product is neither commutative nor anticommutative")));
    };
    let mut lambda: Option<Rational> = None;
    for a in 0..n {
        for b in 0..n {
            let model = mat_lin(&mat_mul(&mats[a], &mats[b]), &mat_mul(&mats[b], &mats[a]), model_sign);
            let got = alg.to_element(&alg.table[a][b]).matrix_at(0, s);
            let pivot = model.iter().flatten().zip(got.iter().flatten()).find(|(m, _)| !Vector::is_zero(*m));
            if lambda.is_none() {
                if let Some((m, g)) = pivot {
                    lambda = Some(g / m);
                }
            }
            let scale = lambda.clone().unwrap_or_else(|| rat(0));
            let expect: Matrix = model.iter().map(|r| r.iter().map(|x| x * &scale).collect()).collect();
            if expect != got {
                return Err(MatrixError::NoModel(format!(
                    "{kind}: product of basis {a}, {b} is not a fixed multiple of the {label} model"
                )));
            }
        }
    }
    if lambda.as_ref().is_some_and(Vector::is_zero) {
        return Err(MatrixError::NoModel(format!("{kind}: zero scalar")));
    }
    Ok(Identification { label, lambda, dimension: n, k })
}
