use monozeta::algebra::{LaurentL, PolyT};

/// `P_1(T)` for `(4,6,13)`: `(T-degree, [(L-exponent, coefficient)])`.
pub const P1: &[(usize, &[(i64, i64)])] = &[
    (31, &[(1, 1), (0, 1)]),
    (30, &[(3, -1)]),
    (29, &[(3, 1)]),
    (28, &[(6, -1), (5, -1)]),
    (27, &[(6, 1), (5, 1)]),
    (26, &[(8, -2)]),
    (25, &[(9, -1), (8, 1)]),
    (24, &[(12, 1), (11, -1)]),
    (23, &[(12, -1), (11, 1)]),
    (22, &[(15, 1), (14, -1)]),
    (21, &[(15, -1), (14, 1)]),
    (20, &[(18, 1)]),
    (19, &[(18, -1)]),
    (14, &[(25, -1)]),
    (13, &[(25, 1)]),
    (12, &[(29, 1), (28, -1)]),
    (11, &[(29, -1), (28, 1)]),
    (10, &[(32, 1), (31, -1)]),
    (9, &[(32, -1), (31, 1)]),
    (8, &[(35, 1), (34, -1)]),
    (7, &[(35, -1), (34, 1)]),
    (5, &[(38, -1), (37, -1)]),
    (4, &[(40, 1)]),
    (3, &[(40, -1)]),
    (2, &[(43, 1), (42, 1)]),
    (1, &[(43, -1), (42, -1)]),
    (0, &[(46, 1), (45, 1)]),
];

pub fn p1() -> PolyT {
    let mut p = PolyT::zero();
    for (d, terms) in P1 {
        p.add_term(*d, &LaurentL::from_terms(terms.iter().copied()));
    }
    p
}
