use hilbstab::ratlin::*;

#[test]
fn equality_with_negative_rhs() {
    // maximize t s.t. t <= rho1 - rho2, |rho_i| <= 1, rho1 + rho2 = 0,
    // rho1 = -1  (negative equality rhs forces a flipped artificial row)
    let z = Rat::zero;
    let lp = LinearProgram {
        maximize: vec![z(), z(), Rat::one()],
        ineqs: vec![
            (vec![-Rat::one(), Rat::one(), Rat::one()], z()),
            (vec![Rat::one(), z(), z()], Rat::one()),
            (vec![-Rat::one(), z(), z()], Rat::one()),
            (vec![z(), Rat::one(), z()], Rat::one()),
            (vec![z(), -Rat::one(), z()], Rat::one()),
        ],
        eqs: vec![
            (vec![Rat::one(), Rat::one(), z()], z()),
            (vec![Rat::one(), z(), z()], -Rat::one()),
        ],
    };
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert_eq!(sol.objective, -Rat::int(2));
}
