use qverma_core::beckorder::find_pi;
use qverma_core::rootsys::{build_cartan, CartanSpec};
use qverma_core::uq::{RootVectorFactory, UqPresentation};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let cd = build_cartan(&CartanSpec::Tag("A1~".into())).unwrap();
    let ord = Arc::new(find_pi(&cd, 8).unwrap());
    let pres = Arc::new(UqPresentation::new(&cd).unwrap());
    let factory = RootVectorFactory::new(pres, Arc::clone(&ord));
    for k in [0i64, 1, -1, 2, -2, 3, -3, 4, -4] {
        let t = Instant::now();
        let rv = factory.real(k).unwrap();
        println!(
            "k={k:>3}  terms={:>5}  ht={}  {:?}",
            rv.element.num_terms(),
            rv.element.max_height(),
            t.elapsed()
        );
    }
}
