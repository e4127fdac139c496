#pragma once

#include <string>
#include <vector>

#include "lsr/driver.hpp"
#include "lsr/grid.hpp"

namespace lsr {

struct OutputSpec {
    std::string prefix;
    bool write_fields = false;
    bool write_metrics = false;
    bool write_per_run = true;
};

// Legacy VTK ASCII STRUCTURED_POINTS, one double scalar array, values in
// x-fastest order; 2d fields carry a z-dimension of 1.
void write_field_vtk(const ScalarField& field, const std::string& path,
                     const std::string& array_name = "phi");

// Header "run,iter,E2,delta_E,err_cloud,l1_update,l1_error,wall_ms", one row
// per iteration, 17 significant digits, absent optionals left blank.
void write_metrics_csv(const std::vector<LogRow>& log, const std::string& path);

int cli_main(int argc, const char* const* argv);

}  // namespace lsr
