#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, Result partial) : std::runtime_error(what), result(partial) {}
    Result result;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    int max_intervals = 20000;
};

// Global adaptive Gauss-Kronrod (7/15) over the given breakpoints.
Result gauss_kronrod(const std::function<double(double)>& f, const std::vector<double>& breaks,
                     const Options& opt = {});
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, const Options& opt = {});

// as above; throws QuadratureError when the tolerance is not reached
Result integrate(const std::function<double(double)>& f, const std::vector<double>& breaks, const Options& opt = {});
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt = {});

}  // namespace momentlab::quad
