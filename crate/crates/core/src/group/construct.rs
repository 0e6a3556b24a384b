//! Standard permutation representations and product constructions.

use super::{FinGroup, Permutation};
use crate::error::{Error, Result};

fn cycle(degree: usize, points: impl IntoIterator<Item = usize>) -> Permutation {
    let points: Vec<usize> = points.into_iter().collect();
    Permutation::from_cycles(degree, &[points]).expect("valid cycle")
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.into()))
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// `C_n` generated by an `n`-cycle.
pub fn cyclic(n: usize, limit: usize) -> Result<FinGroup> {
    require(n >= 1, "C(n) needs n >= 1")?;
    let gens = if n == 1 { vec![] } else { vec![cycle(n, 0..n)] };
    FinGroup::generate(n, gens, limit)
}

/// Dihedral group of order `2n`. For `n ≥ 3` it acts on the vertices of an
/// `n`-gon; `D(1) = C₂` and `D(2) = C₂ × C₂` use small faithful actions.
pub fn dihedral(n: usize, limit: usize) -> Result<FinGroup> {
    require(n >= 1, "D(n) needs n >= 1")?;
    match n {
        1 => FinGroup::generate(2, vec![cycle(2, [0, 1])], limit),
        2 => FinGroup::generate(4, vec![cycle(4, [0, 1]), cycle(4, [2, 3])], limit),
        _ => {
            let rotation = cycle(n, 0..n);
            let images = (0..n).map(|i| ((n - i) % n) as u32).collect();
            let reflection = Permutation::from_images(images)?;
            FinGroup::generate(n, vec![rotation, reflection], limit)
        }
    }
}

/// `S_n` generated by `(0 1)` and `(0 1 … n−1)`.
pub fn symmetric(n: usize, limit: usize) -> Result<FinGroup> {
    require(n >= 1, "S(n) needs n >= 1")?;
    let gens = match n {
        1 => vec![],
        2 => vec![cycle(2, [0, 1])],
        _ => vec![cycle(n, [0, 1]), cycle(n, 0..n)],
    };
    FinGroup::generate(n, gens, limit)
}

/// `A_n` generated by the 3-cycles `(0 1 i)`.
pub fn alternating(n: usize, limit: usize) -> Result<FinGroup> {
    require(n >= 1, "A(n) needs n >= 1")?;
    let gens = (2..n).map(|i| cycle(n, [0, 1, i])).collect();
    FinGroup::generate(n, gens, limit)
}

/// Quaternion group via its regular representation; points `0..8` stand
/// for `1, i, j, k, −1, −i, −j, −k`.
pub fn quaternion(limit: usize) -> Result<FinGroup> {
    // Unit quaternion product on (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k.
    fn prod(a: (bool, usize), b: (bool, usize)) -> (bool, usize) {
        const TABLE: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let (s, axis) = TABLE[a.1][b.1];
        (s ^ a.0 ^ b.0, axis)
    }
    let decode = |p: usize| (p >= 4, p % 4);
    let encode = |(s, axis): (bool, usize)| axis + if s { 4 } else { 0 };
    // Right multiplication by q.
    let right = |q: usize| {
        let images = (0..8)
            .map(|p| encode(prod(decode(p), decode(q))) as u32)
            .collect();
        Permutation::from_images(images).expect("regular action")
    };
    FinGroup::generate(8, vec![right(1), right(2)], limit)
}

/// Elementary abelian group `(C_p)^k` on `k` disjoint `p`-cycles.
pub fn elementary_abelian(p: usize, k: usize, limit: usize) -> Result<FinGroup> {
    require(is_prime(p as u64), format!("E(p,k) needs p prime, got {p}"))?;
    require(k >= 1, "E(p,k) needs k >= 1")?;
    let degree = p * k;
    let gens = (0..k).map(|i| cycle(degree, i * p..(i + 1) * p)).collect();
    FinGroup::generate(degree, gens, limit)
}

/// Direct product on disjoint point sets: `G` on the first `deg G` points.
pub fn direct_product(g: &FinGroup, h: &FinGroup, limit: usize) -> Result<FinGroup> {
    check_order(g.order() as u128 * h.order() as u128, limit)?;
    let degree = g.degree() + h.degree();
    let mut gens: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|p| p.shifted(0, degree))
        .collect();
    gens.extend(h.generators().iter().map(|p| p.shifted(g.degree(), degree)));
    FinGroup::generate(degree, gens, limit)
}

/// `H ≀ K` with `K` acting on its own points `X`: point `(x, p)` is
/// `x·deg(H) + p`, the base group is `|X|` copies of `H`, one per block,
/// and `K` permutes the blocks.
pub fn wreath_product(h: &FinGroup, k: &FinGroup, limit: usize) -> Result<FinGroup> {
    let blocks = k.degree();
    let expected = (h.order() as u128)
        .checked_pow(blocks as u32)
        .map(|b| b * k.order() as u128);
    check_order(expected.unwrap_or(u128::MAX), limit)?;
    let m = h.degree();
    let degree = blocks * m;
    let mut gens = Vec::new();
    for x in 0..blocks {
        gens.extend(h.generators().iter().map(|p| p.shifted(x * m, degree)));
    }
    for t in k.generators() {
        let images = (0..degree)
            .map(|pt| (t.apply(pt / m) * m + pt % m) as u32)
            .collect();
        gens.push(Permutation::from_images(images)?);
    }
    FinGroup::generate(degree, gens, limit)
}

fn check_order(order: u128, limit: usize) -> Result<()> {
    if order > limit as u128 {
        Err(Error::SizeLimitExceeded { limit })
    } else {
        Ok(())
    }
}
