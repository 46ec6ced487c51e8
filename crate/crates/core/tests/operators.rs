use hotstart_core::encoding::{encode_ladder, encode_product};
use hotstart_core::exact::dense_matrix;
use hotstart_core::{
    build_fermion_hamiltonian, encode, parse_fcidump, Encoding, FermionOperatorSum, FermionTerm, LadderOp, SpinOrder,
};
use nalgebra::DMatrix;
use num_complex::Complex64;

type M = DMatrix<Complex64>;

fn ladder(enc: Encoding, op: LadderOp, n: usize) -> M {
    let dim = 1 << n;
    encode_ladder(enc, op, n)
        .unwrap()
        .iter()
        .fold(M::zeros(dim, dim), |acc, (w, p)| acc + p.dense_matrix().unwrap() * *w)
}

fn max_abs(m: &M) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

#[test]
fn canonical_anticommutation_exhaustive() {
    for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
        for n in 1..=4 {
            let dim = 1 << n;
            let id = M::identity(dim, dim);
            let a: Vec<M> = (0..n).map(|j| ladder(enc, LadderOp::annihilate(j), n)).collect();
            let ad: Vec<M> = (0..n).map(|j| ladder(enc, LadderOp::create(j), n)).collect();
            for i in 0..n {
                assert!(max_abs(&(&ad[i] - a[i].adjoint())) < 1e-14);
                for j in 0..n {
                    let mixed = &a[i] * &ad[j] + &ad[j] * &a[i];
                    let expect = if i == j { id.clone() } else { M::zeros(dim, dim) };
                    assert!(max_abs(&(mixed - expect)) < 1e-14, "{enc:?} n={n} {{a{i}, a+{j}}}");
                    assert!(
                        max_abs(&(&a[i] * &a[j] + &a[j] * &a[i])) < 1e-14,
                        "{enc:?} n={n} {{a{i}, a{j}}}"
                    );
                }
            }
        }
    }
}

#[test]
fn ladder_products_match_matrix_products() {
    let n = 4;
    let ops = [
        LadderOp::create(3),
        LadderOp::create(1),
        LadderOp::annihilate(2),
        LadderOp::annihilate(0),
    ];
    for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
        let direct = ops
            .iter()
            .fold(M::identity(1 << n, 1 << n), |acc, &o| acc * ladder(enc, o, n));
        let summed = encode_product(enc, &ops, n)
            .unwrap()
            .iter()
            .fold(M::zeros(1 << n, 1 << n), |acc, (w, p)| {
                acc + p.dense_matrix().unwrap() * *w
            });
        assert!(max_abs(&(direct - summed)) < 1e-14);
    }
}

#[test]
fn number_operator_commutes_with_hamiltonian() {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/h2_sto3g.fcidump")).unwrap();
    let ints = parse_fcidump(text.as_bytes()).unwrap();
    let fop = build_fermion_hamiltonian(&ints, SpinOrder::Interleaved);
    let n = fop.n_modes();
    let number = FermionOperatorSum::from_terms(
        n,
        (0..n).map(|j| FermionTerm {
            coeff: 1.0,
            ops: vec![LadderOp::create(j), LadderOp::annihilate(j)],
        }),
    )
    .unwrap();
    for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
        let h = dense_matrix(&encode(&fop, enc).unwrap()).unwrap();
        let nn = dense_matrix(&encode(&number, enc).unwrap()).unwrap();
        assert!(max_abs(&(&h * &nn - &nn * &h)) < 1e-12, "{enc:?}");
        // N is diagonal in both encodings' occupation sense: eigenvalues 0..=n
        let mut eig: Vec<f64> = nn.map(|z| z.re).symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        assert!((eig[0]).abs() < 1e-12 && (eig[eig.len() - 1] - n as f64).abs() < 1e-12);
    }
}
