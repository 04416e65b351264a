// Generated by tools/gen_field_table.py; do not edit.
#include "ntk/field.hpp"

namespace ntk {

const std::vector<FieldTableRow>& field_table() {
    static const std::vector<FieldTableRow> rows = {
        {1, 1, 1, 0, 1},
        {2, 8, 1, 1, 1},
        {3, 12, 2, 1, 1},
        {5, 5, 0, 1, 1},
        {6, 24, 5, 2, 1},
        {7, 28, 8, 3, 1},
        {10, 40, 3, 1, 2},
        {11, 44, 10, 3, 1},
        {13, 13, 1, 1, 1},
        {14, 56, 15, 4, 1},
        {15, 60, 4, 1, 2},
        {17, 17, 3, 2, 1},
        {19, 76, 170, 39, 1},
        {21, 21, 2, 1, 1},
        {22, 88, 197, 42, 1},
        {23, 92, 24, 5, 1},
        {26, 104, 5, 1, 2},
        {29, 29, 2, 1, 1},
        {30, 120, 11, 2, 2},
        {31, 124, 1520, 273, 1},
        {33, 33, 19, 8, 1},
        {34, 136, 35, 6, 2},
        {35, 140, 6, 1, 2},
        {37, 37, 5, 2, 1},
        {38, 152, 37, 6, 1},
        {39, 156, 25, 4, 2},
        {41, 41, 27, 10, 1},
        {42, 168, 13, 2, 2},
        {43, 172, 3482, 531, 1},
        {46, 184, 24335, 3588, 1},
        {47, 188, 48, 7, 1},
        {51, 204, 50, 7, 2},
        {53, 53, 3, 1, 1},
        {55, 220, 89, 12, 2},
        {57, 57, 131, 40, 1},
        {58, 232, 99, 13, 2},
        {59, 236, 530, 69, 1},
        {61, 61, 17, 5, 1},
        {62, 248, 63, 8, 1},
        {65, 65, 7, 2, 2},
        {66, 264, 65, 8, 2},
        {67, 268, 48842, 5967, 1},
        {69, 69, 11, 3, 1},
        {70, 280, 251, 30, 2},
        {71, 284, 3480, 413, 1},
        {73, 73, 943, 250, 1},
        {74, 296, 43, 5, 2},
        {77, 77, 4, 1, 1},
        {78, 312, 53, 6, 2},
        {79, 316, 80, 9, 3},
        {82, 328, 9, 1, 4},
        {83, 332, 82, 9, 1},
        {85, 85, 4, 1, 2},
        {86, 344, 10405, 1122, 1},
        {87, 348, 28, 3, 2},
        {89, 89, 447, 106, 1},
        {91, 364, 1574, 165, 2},
        {93, 93, 13, 3, 1},
        {94, 376, 2143295, 221064, 1},
        {95, 380, 39, 4, 2},
        {97, 97, 5035, 1138, 1},
    };
    return rows;
}

}  // namespace ntk
