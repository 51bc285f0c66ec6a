#include "tempreg/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tempreg {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream out;
    out << "experiment,seed,step,metric,value,beta,lambda,sigma2,n_smooth,method\n";
    for (const auto& r : records) {
        out << r.experiment << ',' << r.seed << ',' << r.step << ',' << r.metric << ','
            << format_double(r.value) << ',';
        if (r.beta) out << format_double(*r.beta);
        out << ',';
        if (r.lambda) out << format_double(*r.lambda);
        out << ',';
        if (r.sigma2) out << format_double(*r.sigma2);
        out << ',';
        if (r.n_smooth) out << *r.n_smooth;
        out << ',' << r.method << '\n';
    }
    return out.str();
}

void write_records_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << records_to_csv(records);
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace tempreg
