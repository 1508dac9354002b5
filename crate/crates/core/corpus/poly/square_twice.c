int f(int x) {
    int y;
    y = x * x;
    y = y * y;
    return y;
}
