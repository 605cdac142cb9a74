//! End-to-end constructor checks against the persisted dimension-4 witness
//! store. The store file is produced by the base-case search (`search-base`)
//! and committed under `data/`; every entry is re-verified on load.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cubepath_core::builder::{cover, lhc_path};
use cubepath_core::config::{in_s, in_sprime, Configuration};
use cubepath_core::cube::TritVector;
use cubepath_core::paths::verify;
use cubepath_core::store::WitnessStore;
use cubepath_core::symmetry::{normalize, Symmetry};

fn load_store() -> WitnessStore {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/witnesses-d4.txt");
    let text = std::fs::read_to_string(path)
        .expect("data/witnesses-d4.txt missing; run `cubepath search-base --d 4` first");
    let (store, diagnostics) = WitnessStore::parse(&text).expect("parsable store");
    assert!(diagnostics.is_empty(), "store entries must re-verify: {diagnostics:?}");
    store
}

fn random_vertex<R: Rng>(d: usize, rng: &mut R) -> TritVector {
    TritVector::from_index(d, rng.gen_range(0..3usize.pow(d as u32)))
}

fn random_quad<R: Rng>(d: usize, rng: &mut R) -> Configuration {
    loop {
        let vs: Vec<TritVector> = (0..4).map(|_| random_vertex(d, rng)).collect();
        if let Ok(c) =
            Configuration::quad(vs[0].clone(), vs[1].clone(), vs[2].clone(), vs[3].clone())
        {
            return c;
        }
    }
}

#[test]
fn store_covers_all_of_sprime4() {
    let store = load_store();
    // the store keys S'(4) completely (plus the other covered members)
    for (key, cert) in store.iter() {
        assert_eq!(verify(cert), Ok(()));
        assert_eq!(cert.path.len(), 79);
        assert_eq!(key.dim(), 4);
    }
    assert!(store.len() > 1000, "expected most of the 1071 configurations covered");
}

#[test]
fn store_lookup_maps_through_symmetries() {
    let store = load_store();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 50 {
        let c = random_quad(4, &mut rng);
        if !in_sprime(&c).unwrap() {
            continue;
        }
        let cert = store.lookup(&c).expect("S'(4) is fully covered");
        assert_eq!(verify(&cert), Ok(()));
        assert_eq!(&cert.start, c.a());
        assert_eq!(&cert.end, c.b());
        // symmetry image of the query is answered by the image certificate
        let s = Symmetry::random(4, &mut rng);
        let img = s.apply_config(&c).unwrap();
        if in_sprime(&img).unwrap() {
            let icert = store.lookup(&img).expect("orbit stays in S'");
            assert_eq!(verify(&icert), Ok(()));
            assert_eq!(&icert.start, img.a());
        }
        checked += 1;
    }
}

#[test]
fn lookup_in_normalized_frame_returns_stored_path() {
    let store = load_store();
    let (key, stored) = store.iter().next().expect("nonempty store");
    let got = store.lookup(key).unwrap();
    assert_eq!(&got, stored);
}

#[test]
fn cover_random_s5_configurations() {
    let store = load_store();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut done = 0;
    while done < 40 {
        let c = random_quad(5, &mut rng);
        if !in_s(&c).unwrap() {
            continue;
        }
        let cert = cover(&c, &store).expect("S(5) is covered");
        assert_eq!(verify(&cert), Ok(()));
        assert_eq!(&cert.start, c.a());
        assert_eq!(&cert.end, c.b());
        assert_eq!(cert.path.len(), 3usize.pow(5) - 2);
        done += 1;
    }
}

#[test]
fn cover_rejects_non_members() {
    let store = load_store();
    // matrix A is in S(4) but not S'(4): the base of the recursion refuses
    let a = Configuration::quad(
        "0000".parse().unwrap(),
        "1111".parse().unwrap(),
        "1122".parse().unwrap(),
        "2211".parse().unwrap(),
    )
    .unwrap();
    assert!(cover(&a, &store).is_err());
}

#[test]
fn lhc_connects_sample_pairs_at_d4_through_d6() {
    let store = load_store();
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for d in 4..=6 {
        let n = 3usize.pow(d as u32);
        for _ in 0..8 {
            let a = random_vertex(d, &mut rng);
            let b = loop {
                let b = random_vertex(d, &mut rng);
                if b != a {
                    break b;
                }
            };
            let cert = lhc_path(&a, &b, &store).expect("loose Hamilton connected");
            assert_eq!(verify(&cert), Ok(()));
            assert_eq!(cert.path.len(), n);
            assert_eq!(cert.path.len() / 2, (n - 1) / 2, "LHP edge count");
            assert!(cert.omitted.is_empty());
            assert_eq!(cert.start, a);
            assert_eq!(cert.end, b);
        }
    }
}

#[test]
fn lhc_rejects_equal_endpoints_and_small_dimensions() {
    let store = load_store();
    let a: TritVector = "0000".parse().unwrap();
    assert!(lhc_path(&a, &a, &store).is_err());
    let u: TritVector = "000".parse().unwrap();
    let w: TritVector = "111".parse().unwrap();
    assert!(lhc_path(&u, &w, &store).is_err());
}

#[test]
fn cover_certificates_are_symmetry_stable() {
    // mapping a covered configuration through a symmetry and covering the
    // image yields a certificate for the image; both verify
    let store = load_store();
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut done = 0;
    while done < 10 {
        let c = random_quad(5, &mut rng);
        if !in_s(&c).unwrap() {
            continue;
        }
        let s = Symmetry::random(5, &mut rng);
        let img = s.apply_config(&c).unwrap();
        assert_eq!(
            normalize(&img).unwrap().config,
            normalize(&c).unwrap().config,
            "same orbit"
        );
        if in_s(&img).unwrap() {
            let cert = cover(&img, &store).expect("symmetry image stays coverable");
            assert_eq!(verify(&cert), Ok(()));
        }
        done += 1;
    }
}
