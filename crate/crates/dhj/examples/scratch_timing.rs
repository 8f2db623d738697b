use dhj::ratio::parse_q;
use dhj::search::{dhj_value, max_linefree, SearchBudget};
use std::time::Instant;

fn main() {
    let budget = SearchBudget::default();
    for n in 1..=5u16 {
        let t = Instant::now();
        let r = max_linefree(2, n, &budget).unwrap();
        println!("max_linefree(2,{n}) = {} nodes={} in {:?}", r.size, r.nodes, t.elapsed());
    }
    for (k, n) in [(3u16, 1u16), (3, 2), (3, 3)] {
        let t = Instant::now();
        let r = max_linefree(k, n, &budget).unwrap();
        println!("max_linefree({k},{n}) = {} nodes={} in {:?}", r.size, r.nodes, t.elapsed());
    }
    let t = Instant::now();
    let r = dhj_value(2, &parse_q("1/2").unwrap(), 6, &budget).unwrap();
    println!("dhj_value(2,1/2,6) -> {:?} in {:?}", r.found().map(|h| h.value), t.elapsed());
    let t = Instant::now();
    let r = dhj_value(2, &parse_q("1/4").unwrap(), 6, &budget).unwrap();
    println!("dhj_value(2,1/4,6) -> {:?} in {:?}", r.found().map(|h| h.value), t.elapsed());
    let t = Instant::now();
    let r = max_linefree(2, 6, &budget).unwrap();
    println!("max_linefree(2,6) = {} nodes={} in {:?}", r.size, r.nodes, t.elapsed());
}
