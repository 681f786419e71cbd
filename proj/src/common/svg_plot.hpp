#ifndef CORNERFEM_COMMON_SVG_PLOT_HPP
#define CORNERFEM_COMMON_SVG_PLOT_HPP

#include <string>
#include <vector>

namespace cornerfem {

/// Minimal log-log line plot writer; enough for convergence and decay curves
/// without an external plotting dependency.
class SvgLogLogPlot {
public:
  SvgLogLogPlot(std::string title, std::string xlabel, std::string ylabel);

  /// Adds a curve; when fit_slope is true a least-squares power-law fit is
  /// drawn dashed and the slope appears in the legend.
  void add_series(const std::string& name, const std::vector<double>& x,
                  const std::vector<double>& y, bool fit_slope = false);

  std::string str() const;
  void save(const std::string& path) const;

private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
    bool fit;
  };
  std::string title_, xlabel_, ylabel_;
  std::vector<Series> series_;
};

}  // namespace cornerfem

#endif
