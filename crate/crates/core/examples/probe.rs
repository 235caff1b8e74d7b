use std::time::Instant;
fn main() {
    use hilbstab::models::{build_model, ModelKind};
    use hilbstab::constructions::wiman;
    use hilbstab::engine::{decide, Budget};

    let t = Instant::now();
    let md = build_model(ModelKind::Wiman, 12).unwrap();
    let e = wiman::type2(&md, 6, None).unwrap();
    let _w = e.weight_form(&md.mb_ctx());
    println!("type2 g=12 m=6: {:?}", t.elapsed());

    let t = Instant::now();
    let md = build_model(ModelKind::Wiman, 8).unwrap();
    match wiman::wiman_certificate(&md, 5).unwrap() {
        wiman::WimanCertificate::Pointed(c) => println!("pointed g=8 m=5: {} certs {:?}", c.len(), t.elapsed()),
        _ => unreachable!(),
    }

    let t = Instant::now();
    let md = build_model(ModelKind::RosaryCanonical, 15).unwrap();
    let v = decide(&md, 2, &Budget::default()).unwrap();
    println!("decide rosary1 g=15 m=2: {:?} cuts={} {:?}", v.status, v.cuts_used, t.elapsed());

    let t = Instant::now();
    let v = decide(&md, 5, &Budget::default()).unwrap();
    println!("decide rosary1 g=15 m=5: {:?} cuts={} {:?}", v.status, v.cuts_used, t.elapsed());

    let t = Instant::now();
    let md = build_model(ModelKind::Wiman, 4).unwrap();
    let v = decide(&md, 3, &Budget::default()).unwrap();
    println!("decide wiman g=4 m=3: {:?} margin={} {:?}", v.status, v.margin, t.elapsed());

    let t = Instant::now();
    let md = build_model(ModelKind::Wiman, 3).unwrap();
    let v = decide(&md, 4, &Budget::default()).unwrap();
    println!("decide wiman g=3 m=4: {:?} margin={} {:?}", v.status, v.margin, t.elapsed());
}
