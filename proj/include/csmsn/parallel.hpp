#ifndef CSMSN_PARALLEL_HPP
#define CSMSN_PARALLEL_HPP

#include <functional>

namespace csmsn {

// Worker count: min(hardware, CSMSN_THREADS when set, job count), at least 1.
int worker_count(int n_jobs);

// Run fn(0..n-1) across workers. Exceptions are captured and the first one
// rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace csmsn

#endif
