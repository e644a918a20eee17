//! Times the three class counts on the free group of rank 2, rank-2 trivial system, over
//! `F_p[t]/t^3`: `cargo run --release --example class_counts -- [p] [dgla|sdc|rep|all]`.

use std::time::Instant;

use defhull::artin::TestRing;
use defhull::complexes::{presentation_complex, Presentation};
use defhull::dgla::{def_classes, dgla_from_complex};
use defhull::hull::representation_classes;
use defhull::linalg::{Field, Matrix};
use defhull::orbits::DEFAULT_BUDGET;
use defhull::sdc::sdc_classes;

fn main() -> defhull::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let which = args.get(2).map_or("all", String::as_str);
    let field = Field::Prime(p);
    let ring = TestRing::truncated_polynomial(field, 3)?;
    let pres = Presentation::parse(&["a", "b"], &[])?;
    let pc = presentation_complex(&pres)?;
    let rho = vec![Matrix::identity(field, 2); 2];
    let sys = pc.local_system(field, &rho)?;
    let d = dgla_from_complex(&pc.complex, &sys)?;
    let run = |name: &str, f: &dyn Fn() -> defhull::Result<u128>| -> defhull::Result<()> {
        if which == "all" || which == name {
            let t = Instant::now();
            let n = f()?;
            println!("{name} {n} {:.2?}", t.elapsed());
        }
        Ok(())
    };
    run("dgla", &|| Ok(def_classes(&d, &ring, DEFAULT_BUDGET)?.count))?;
    run("sdc", &|| sdc_classes(&pc.complex, &sys, &ring, DEFAULT_BUDGET))?;
    run("rep", &|| representation_classes(&pres, &rho, &ring, DEFAULT_BUDGET))?;
    Ok(())
}
