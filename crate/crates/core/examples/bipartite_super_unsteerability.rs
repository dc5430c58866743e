//! One level down: the conditional box Q_0 seen as a bipartite box with an
//! untrusted qubit and a trusted qubit.

use tribox::decomposition::{
    build_d4_qubit_model, certify_super_unsteerable, conditional_box, verify_qubit_model, SearchOptions,
};

pub fn run() -> tribox::Result<()> {
    let opts = SearchOptions::default();
    for v in [0.3, 0.5, 0.6] {
        let q = conditional_box(0, v)?;
        let cert = certify_super_unsteerable(&q, 2, None, &opts)?;
        println!("V = {v}: {:?}", cert.conclusion);
        for n in &cert.notes {
            println!("    {n}");
        }
    }
    let model = build_d4_qubit_model(0.4)?;
    let r = verify_qubit_model(&model, &conditional_box(0, 0.4)?, 1e-12);
    println!("single-qubit hidden states reproduce Q_0 at V = 0.4: {}", r.ok);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tribox::Result<()> {
    run()
}
