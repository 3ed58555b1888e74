// Scratch diagnostic: discretization bias of left-point wealth estimators.
use kylelab::simulate::{run_ensemble, Scenario, Scheme, SimConfig, View};
use kylelab::stats::mean_and_se;
use kylelab::{Branch, ModelKind, ModelParams};

fn main() {
    let p = ModelParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
    for kind in [ModelKind::CompetitiveInsider, ModelKind::MakerInsider, ModelKind::CompetitiveStrategic, ModelKind::MakerStrategic, ModelKind::KyleBenchmark] {
        let pk = if kind == ModelKind::KyleBenchmark { ModelParams { rho: 0.0, ..p } } else { p };
        let s = Scenario::new(pk, kind, Branch::TWO).unwrap();
        let profit_target = kylelab::metrics::profits(kind, &pk, Branch::TWO).unwrap();
        let noise_target = -s.quote.lambda_pre;
        for steps in [1000usize, 2000, 4000] {
            let c = SimConfig { n_paths: 200_000, n_steps: steps, seed: 99, scheme: Scheme::ExactTransition, view: View::InsiderView };
            let t0 = std::time::Instant::now();
            let pairs = run_ensemble(&s, &c, |b| (b.wealth_insider(), b.wealth_noise()));
            let wi: Vec<f64> = pairs.iter().map(|x| x.0).collect();
            let wn: Vec<f64> = pairs.iter().map(|x| x.1).collect();
            let (mi, si) = mean_and_se(&wi);
            let (mn, sn) = mean_and_se(&wn);
            println!(
                "{kind} steps={steps}: profit z={:+.2} (mean {mi:.5} tgt {profit_target:.5} se {si:.5}) noise z={:+.2} (mean {mn:.5} tgt {noise_target:.5} se {sn:.5})  [{:.1}s]",
                (mi - profit_target) / si,
                (mn - noise_target) / sn,
                t0.elapsed().as_secs_f64()
            );
        }
    }
}
