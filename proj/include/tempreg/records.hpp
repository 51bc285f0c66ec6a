#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tempreg {

/**
 * One measurement row. Optional parameter fields echo the regularizer and
 * environment settings of the run that produced the value so every output
 * file is self-describing; absent fields serialize as empty CSV cells.
 * seed == -1 marks ensemble aggregates.
 */
struct ExperimentRecord {
    std::string experiment;
    long long seed = 0;
    long long step = 0;
    std::string metric;
    double value = 0.0;
    std::optional<double> beta;
    std::optional<double> lambda;
    std::optional<double> sigma2;
    std::optional<int> n_smooth;
    std::string method;
};

/// Shortest exact decimal representation (round-trips bit-for-bit).
std::string format_double(double v);

/// Writes header `experiment,seed,step,metric,value,beta,lambda,sigma2,n_smooth,method`
/// and one row per record, in order. Byte-identical across re-runs.
void write_records_csv(const std::string& path, const std::vector<ExperimentRecord>& records);

std::string records_to_csv(const std::vector<ExperimentRecord>& records);

}  // namespace tempreg
