// Compares the serial reference explorer against the OpenMP frontier
// expansion on a synthetic model, and checks that both produce the same LTS.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "pedal/lts.hpp"
#include "pedal/modelgen.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    std::uint32_t toggles = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 15;
    std::uint32_t noops = argc > 2 ? static_cast<std::uint32_t>(std::atoi(argv[2])) : 10;

    pedal::PedalModel model = pedal::make_synthetic_model(toggles, noops);
    std::cout << "model: " << model.input_actions.size() << " actions, " << toggles
              << " toggle bits\n";

    auto t0 = Clock::now();
    pedal::Lts serial = pedal::explore_serial(model, pedal::Engine::Direct);
    double ts = seconds_since(t0);
    std::cout << "serial:   " << serial.n_states << " states, "
              << serial.transitions.size() << " transitions in " << ts << " s\n";

    t0 = Clock::now();
    pedal::Lts parallel = pedal::explore(model, pedal::Engine::Direct);
    double tp = seconds_since(t0);
    std::cout << "parallel: " << parallel.n_states << " states, "
              << parallel.transitions.size() << " transitions in " << tp << " s\n";

    if (!(serial == parallel)) {
        std::cout << "MISMATCH between serial and parallel exploration\n";
        return 1;
    }
    std::cout << "identical results; speedup " << (tp > 0 ? ts / tp : 0.0) << "x\n";
    return 0;
}
