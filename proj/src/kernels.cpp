#include "gaze/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gaze/eval.hpp"

namespace gaze {

namespace {

std::vector<TrialMetrics> evaluate_job(const TrialJob& job) {
    const Trace trace = gen_scenario(job.scenario);
    const auto spans = intentional_spans(trace);
    std::vector<TrialMetrics> out;
    out.reserve(job.configs.size());
    for (const auto& c : job.configs) out.push_back(run_trial(trace, c, spans));
    return out;
}

}  // namespace

TrialResults evaluate_trials_serial(const std::vector<TrialJob>& jobs) {
    TrialResults results(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = evaluate_job(jobs[i]);
    return results;
}

TrialResults evaluate_trials_parallel(const std::vector<TrialJob>& jobs) {
    TrialResults results(jobs.size());
    const auto n = static_cast<long long>(jobs.size());
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = evaluate_job(jobs[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(gaze_trial_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

TrialResults evaluate_trials(const std::vector<TrialJob>& jobs, Execution exec) {
    return exec == Execution::Serial ? evaluate_trials_serial(jobs) : evaluate_trials_parallel(jobs);
}

int parallel_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace gaze
