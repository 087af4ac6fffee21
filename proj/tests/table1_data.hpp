#pragma once

// Conjugacy classes of D6 x O(2) for the family l: id, generic name (ASCII,
// D~ for the second dihedral class, K-part in terms of l), |W| with 0 for
// an infinite Weyl group.
struct Table1Row {
    int id;
    const char* name;
    long weyl;
};

inline constexpr Table1Row kTable1[] = {
    {1, "Z1xZl", 0},
    {2, "D1xZl", 0},
    {3, "Z2xZl", 0},
    {4, "D~1xZl", 0},
    {5, "Z3xZl", 0},
    {6, "D2xZl", 0},
    {7, "D3xZl", 0},
    {8, "Z6xZl", 0},
    {9, "D~3xZl", 0},
    {10, "D6xZl", 0},
    {11, "D1^{Z1}x_{Z2}Z2l", 0},
    {12, "Z2^{Z1}x_{Z2}Z2l", 0},
    {13, "D~1^{Z1}x_{Z2}Z2l", 0},
    {14, "D2^{D1}x_{Z2}Z2l", 0},
    {15, "D2^{Z2}x_{Z2}Z2l", 0},
    {16, "D2^{D~1}x_{Z2}Z2l", 0},
    {17, "D3^{Z3}x_{Z2}Z2l", 0},
    {18, "Z6^{Z3}x_{Z2}Z2l", 0},
    {19, "D~3^{Z3}x_{Z2}Z2l", 0},
    {20, "D6^{D3}x_{Z2}Z2l", 0},
    {21, "D6^{Z6}x_{Z2}Z2l", 0},
    {22, "D6^{D~3}x_{Z2}Z2l", 0},
    {23, "Z3^{Z1}x_{Z3}Z3l", 0},
    {24, "Z6^{Z2}x_{Z3}Z3l", 0},
    {25, "Z6^{Z1}x_{Z6}Z6l", 0},
    {26, "D1^{Z1}x_{D1}Dl", 8},
    {27, "Z2^{Z1}x_{D1}Dl", 24},
    {28, "D~1^{Z1}x_{D1}Dl", 8},
    {29, "D2^{D1}x_{D1}Dl", 4},
    {30, "D2^{Z2}x_{D1}Dl", 4},
    {31, "D2^{D~1}x_{D1}Dl", 4},
    {32, "D3^{Z3}x_{D1}Dl", 8},
    {33, "Z6^{Z3}x_{D1}Dl", 8},
    {34, "D~3^{Z3}x_{D1}Dl", 8},
    {35, "D6^{D3}x_{D1}Dl", 4},
    {36, "D6^{Z6}x_{D1}Dl", 4},
    {37, "D6^{D~3}x_{D1}Dl", 4},
    {38, "D2^{Z1}_{D1}x_{D2}D2l", 4},
    {39, "D2^{Z1}_{Z2}x_{D2}D2l", 4},
    {40, "D2^{Z1}_{D~1}x_{D2}D2l", 4},
    {41, "D6^{Z3}_{D3}x_{D2}D2l", 4},
    {42, "D6^{Z3}_{Z6}x_{D2}D2l", 4},
    {43, "D6^{Z3}_{D~3}x_{D2}D2l", 4},
    {44, "D3^{Z1}x_{D3}D3l", 4},
    {45, "D~3^{Z1}x_{D3}D3l", 4},
    {46, "D6^{Z2}x_{D3}D3l", 2},
    {47, "D6^{Z1}x_{D6}D6l", 2},
    {48, "Z1xDl", 24},
    {49, "D1xDl", 4},
    {50, "Z2xDl", 12},
    {51, "D~1xDl", 4},
    {52, "Z3xDl", 8},
    {53, "D2xDl", 2},
    {54, "D3xDl", 4},
    {55, "Z6xDl", 4},
    {56, "D~3xDl", 4},
    {57, "D6xDl", 2},
    {58, "D1^{Z1}x_{Z2}D2l", 4},
    {59, "Z2^{Z1}x_{Z2}D2l", 12},
    {60, "D~1^{Z1}x_{Z2}D2l", 4},
    {61, "D2^{D1}x_{Z2}D2l", 2},
    {62, "D2^{Z2}x_{Z2}D2l", 2},
    {63, "D2^{D~1}x_{Z2}D2l", 2},
    {64, "D3^{Z3}x_{Z2}D2l", 4},
    {65, "Z6^{Z3}x_{Z2}D2l", 4},
    {66, "D~3^{Z3}x_{Z2}D2l", 4},
    {67, "D6^{D3}x_{Z2}D2l", 2},
    {68, "D6^{Z6}x_{Z2}D2l", 2},
    {69, "D6^{D~3}x_{Z2}D2l", 2},
    {70, "Z1xSO(2)", 24},
    {71, "D1xSO(2)", 4},
    {72, "Z2xSO(2)", 12},
    {73, "D~1xSO(2)", 4},
    {74, "Z3xSO(2)", 8},
    {75, "D2xSO(2)", 2},
    {76, "D3xSO(2)", 4},
    {77, "Z6xSO(2)", 4},
    {78, "D~3xSO(2)", 4},
    {79, "D6xSO(2)", 2},
    {80, "D1^{Z1}x_{D1}O(2)", 4},
    {81, "Z2^{Z1}x_{D1}O(2)", 12},
    {82, "D~1^{Z1}x_{D1}O(2)", 4},
    {83, "D2^{D1}x_{D1}O(2)", 2},
    {84, "D2^{Z2}x_{D1}O(2)", 2},
    {85, "D2^{D~1}x_{D1}O(2)", 2},
    {86, "D3^{Z3}x_{D1}O(2)", 4},
    {87, "Z6^{Z3}x_{D1}O(2)", 4},
    {88, "D~3^{Z3}x_{D1}O(2)", 4},
    {89, "D6^{D3}x_{D1}O(2)", 2},
    {90, "D6^{Z6}x_{D1}O(2)", 2},
    {91, "D6^{D~3}x_{D1}O(2)", 2},
    {92, "Z1xO(2)", 12},
    {93, "D1xO(2)", 2},
    {94, "Z2xO(2)", 6},
    {95, "D~1xO(2)", 2},
    {96, "Z3xO(2)", 4},
    {97, "D2xO(2)", 1},
    {98, "D3xO(2)", 2},
    {99, "Z6xO(2)", 2},
    {100, "D~3xO(2)", 2},
    {101, "D6xO(2)", 1},
};
