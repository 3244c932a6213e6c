// Timing harness: reference enumeration vs the weight-polynomial evaluator,
// and serial vs OpenMP chunk evaluation.  All paths must agree bit for bit;
// the timings show what the kernels buy.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zlab/dissection.hpp"
#include "zlab/partition.hpp"
#include "zlab/verifier.hpp"

using namespace zlab;

namespace {

double time_ms(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const long N = quick ? 400 : 1600;

  RunConfig config = limit_scan_defaults();
  const ModelParams params = config.params_for(N);
  const CouplingSequence couplings = config.sequence();

  std::printf("instance: N=%ld budget=%ld imax=%d", N, params.budget(), params.imax);
#ifdef _OPENMP
  std::printf(" threads=%d\n", omp_get_max_threads());
#else
  std::printf(" threads=1 (no OpenMP)\n");
#endif

  PartitionValue reference, fast;
  const double t_reference =
      time_ms([&] { reference = eval_Z_reference(params, couplings); });
  const double t_fast = time_ms([&] { fast = eval_Z(params, couplings); });
  if (reference.value != fast.value || reference.term_count != fast.term_count) {
    std::printf("MISMATCH: reference and polynomial evaluators disagree\n");
    return 1;
  }
  std::printf("eval_Z   reference (term enumeration): %10.2f ms  (%llu terms)\n", t_reference,
              static_cast<unsigned long long>(reference.term_count));
  std::printf("eval_Z   polynomial kernel:            %10.2f ms  (speedup %.1fx)\n", t_fast,
              t_reference / std::max(t_fast, 1e-3));

  ChunkForest forest;
  const double t_build = time_ms([&] { forest = build_chunks(params, couplings); });
  std::printf("chunks   build:                        %10.2f ms  (%zu chunks)\n", t_build,
              forest.chunks.size());

  ChunkEvaluation serial, parallel;
  const double t_serial =
      time_ms([&] { serial = eval_all_chunks(forest, couplings, params, false); });
  const double t_parallel =
      time_ms([&] { parallel = eval_all_chunks(forest, couplings, params, true); });
  if (serial.total != parallel.total) {
    std::printf("MISMATCH: serial and parallel chunk sums disagree\n");
    return 1;
  }
  if (serial.total != fast.value) {
    std::printf("MISMATCH: chunk sum does not reproduce Z\n");
    return 1;
  }
  std::printf("chunks   eval serial reference:        %10.2f ms\n", t_serial);
  std::printf("chunks   eval OpenMP:                  %10.2f ms  (speedup %.1fx)\n", t_parallel,
              t_serial / std::max(t_parallel, 1e-3));
  std::printf("identical results across all paths\n");
  return 0;
}
