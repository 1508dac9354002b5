int f(int x, int y) {
    int r;
    r = x + y;
    return r;
}
