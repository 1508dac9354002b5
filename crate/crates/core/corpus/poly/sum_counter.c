int f(int n) {
    int y;
    y = 0;
    for (int i = 0; i < n; i++) {
        y = y + i;
    }
    return y;
}
